#include "ht/search.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <unordered_map>
#include <unordered_set>

namespace ht {

void SearchBounds::validate() const {
  if (quote_depth < 1 || formula_size < 1 || iterations < 1)
    throw Error("search bounds must be strictly positive");
}

namespace {

bool within(const FormulaPtr& f, const SearchBounds& b) {
  return f->size() <= b.formula_size && f->quote_depth() <= b.quote_depth;
}

// Closure pass used by build_universe: subformulas, one unfold per referenced
// name, negation, Prov-wrapping. Products outside the bounds are dropped.
void close_under_base_ops(std::map<std::string, FormulaPtr>& seen, std::deque<FormulaPtr>& work,
                          const DefEnv& env, const SearchBounds& b) {
  auto offer = [&](const FormulaPtr& f) {
    if (!within(f, b)) return;
    auto [it, inserted] = seen.emplace(f->key(), f);
    (void)it;
    if (inserted) work.push_back(f);
  };
  while (!work.empty()) {
    FormulaPtr f = work.front();
    work.pop_front();
    switch (f->kind()) {
      case Kind::And:
      case Kind::Or:
      case Kind::Imp:
        offer(f->left());
        offer(f->right());
        break;
      case Kind::Prov:
        offer(f->quoted());
        break;
      default:
        break;
    }
    for (const std::string& n : referenced_names(f)) {
      if (env.contains(n)) offer(unfold_once(f, env, n));
    }
    offer(neg(f));
    offer(Formula::prov(f));
  }
}

} // namespace

std::vector<FormulaPtr> build_universe(const std::vector<FormulaPtr>& seeds, const DefEnv& env,
                                       const SearchBounds& b) {
  b.validate();
  std::map<std::string, FormulaPtr> seen;
  std::deque<FormulaPtr> work;
  for (const FormulaPtr& s : seeds) {
    auto [it, inserted] = seen.emplace(s->key(), s);
    (void)it;
    if (inserted) work.push_back(s);
  }
  close_under_base_ops(seen, work, env, b);

  // One pairwise join pass so implication/conjunction/disjunction goals over
  // base members are representable, then re-close.
  std::vector<FormulaPtr> base;
  base.reserve(seen.size());
  for (const auto& [_, f] : seen) base.push_back(f);
  for (const FormulaPtr& a : base) {
    for (const FormulaPtr& c : base) {
      if (a->size() + c->size() + 1 > b.formula_size) continue;
      for (FormulaPtr j : {Formula::conj(a, c), Formula::disj(a, c), Formula::imp(a, c)}) {
        if (!within(j, b)) continue;
        auto [it, inserted] = seen.emplace(j->key(), j);
        (void)it;
        if (inserted) work.push_back(j);
      }
    }
  }
  close_under_base_ops(seen, work, env, b);

  std::vector<FormulaPtr> out;
  out.reserve(seen.size());
  for (const auto& [_, f] : seen) out.push_back(f);
  std::sort(out.begin(), out.end(), FormulaLess{});
  return out;
}

namespace detail {

struct Node {
  FormulaPtr f;
  int left = -1;  // And/Or/Imp left child, Prov argument
  int right = -1; // And/Or/Imp right child
};

struct AxShape {
  SchemeId scheme;
  int a = -1, b = -1, c = -1; // metavariable instantiations, as universe ids
};

struct Scope;

// How one universe member entered the derived set. Premise fields hold
// universe ids; their meaning depends on the rule.
struct Deriv {
  enum class Via {
    Assume,     // the scope hypothesis itself
    AxShape,    // scheme-shaped universe member taken as an axiom instance
    Lem,        // A | ~A under excluded middle
    AndI, AndE1, AndE2, OrI1, OrI2, ImpE, Def, Efq,
    Necess,     // f          => Prov(f)           via S1
    ProvAnd,    // P a, P b   => P (a & b)         via S2a
    ProvSplit1, // P (a & b)  => P a               via S2b
    ProvSplit2, // P (a & b)  => P b               via S2b
    ProvOr1,    // P a        => P (a | b)         via S3
    ProvOr2,    // P b        => P (a | b)         via S3
    ProvCase,   // P (a|b), P (a->c), P (b->c) => P c  via S4
    ProvMp,     // P a, P (a->b) => P b            via S5
    Refl,       // P a        => a                 via axRefl
    ImpIntro,   // h |- g in a sub-saturation => h -> g
    OrCase,     // a|b with g under a and under b => g
  };
  Via via = Via::Assume;
  int p1 = -1, p2 = -1, p3 = -1;
  SchemeId scheme = SchemeId::S1;
  std::shared_ptr<const Scope> subL, subR;
  int seq = 0; // global add order; premises always carry smaller stamps

  Deriv() = default;
  explicit Deriv(Via v, int a = -1, int b = -1, int c = -1) : via(v), p1(a), p2(b), p3(c) {}
};

// Delta of a single-hypothesis sub-saturation. `absurd` marks scopes where
// 0=1 was reached under ex falso, making every universe member derivable
// without materializing the flood.
struct Scope {
  int hyp = -1;
  bool absurd = false;
  int capture_seq = 0; // top-level facts stamped below this were visible
  std::map<int, Deriv> derivs;
};

} // namespace detail

// Saturation snapshot: everything witness reconstruction needs.
class WitnessStore {
 public:
  std::vector<detail::Node> nodes;
  std::unordered_map<std::string, int> key2id;
  std::map<int, detail::Deriv> top;
  int falsum_id = -1;
  LogicConfig config;
  DefEnv env;

  int id_of(const FormulaPtr& f) const {
    auto it = key2id.find(f->key());
    return it == key2id.end() ? -1 : it->second;
  }
};

namespace {

using detail::AxShape;
using detail::Deriv;
using detail::Node;
using detail::Scope;
using Via = detail::Deriv::Via;

uint64_t pack(int a, int b) {
  return (static_cast<uint64_t>(static_cast<uint32_t>(a)) << 32) | static_cast<uint32_t>(b);
}

class Engine {
 public:
  Engine(const std::vector<FormulaPtr>& universe, const LogicConfig& config, const DefEnv& env,
         const SearchBounds& bounds)
      : cfg_(config), env_(env), bounds_(bounds) {
    build_nodes(universe);
    build_indices();
  }

  void run() {
    seed_axioms();
    propagate();
    rounds_ = 1;
    while (rounds_ < bounds_.iterations) {
      size_t before = derived_count_;
      sweep();
      rounds_++;
      if (derived_count_ == before) {
        saturated_ = true;
        break;
      }
    }
  }

  SaturationResult finish() {
    SaturationResult result;
    result.rounds_used = rounds_;
    result.saturated = saturated_;
    auto store = std::make_shared<WitnessStore>();
    store->nodes = nodes_;
    store->key2id = key2id_;
    store->top = std::move(top_derivs_);
    store->falsum_id = falsum_;
    store->config = cfg_;
    store->env = env_;
    for (int id = 0; id < static_cast<int>(nodes_.size()); id++)
      if (top_in_[id]) result.derived.push_back(nodes_[id].f);
    result.witnesses = std::move(store);
    return result;
  }

 private:
  void build_nodes(const std::vector<FormulaPtr>& universe) {
    nodes_.reserve(universe.size());
    for (const FormulaPtr& f : universe) {
      if (key2id_.count(f->key())) continue;
      key2id_.emplace(f->key(), static_cast<int>(nodes_.size()));
      nodes_.push_back(Node{f, -1, -1});
    }
    for (auto& n : nodes_) {
      switch (n.f->kind()) {
        case Kind::And:
        case Kind::Or:
        case Kind::Imp:
          n.left = id_of(n.f->left());
          n.right = id_of(n.f->right());
          break;
        case Kind::Prov:
          n.left = id_of(n.f->quoted());
          break;
        case Kind::Falsum:
          falsum_ = id_of(n.f);
          break;
        default:
          break;
      }
    }
  }

  int id_of(const FormulaPtr& f) const {
    auto it = key2id_.find(f->key());
    return it == key2id_.end() ? -1 : it->second;
  }

  void build_indices() {
    int n = static_cast<int>(nodes_.size());
    and_parents_.resize(n);
    or_parents_.resize(n);
    imp_by_ante_.resize(n);
    prov_of_.assign(n, -1);
    unfold_nbrs_.resize(n);
    shapes_.resize(n);
    top_in_.assign(n, 0);
    sub_mark_.assign(n, -1);

    for (int id = 0; id < n; id++) {
      const Node& nd = nodes_[id];
      switch (nd.f->kind()) {
        case Kind::And:
          if (nd.left >= 0 && nd.right >= 0) {
            and_parents_[nd.left].push_back({id, nd.right});
            and_parents_[nd.right].push_back({id, nd.left});
            and_at_.emplace(pack(nd.left, nd.right), id);
          }
          break;
        case Kind::Or:
          if (nd.left >= 0 && nd.right >= 0) {
            or_parents_[nd.left].push_back({id, 0});
            or_parents_[nd.right].push_back({id, 1});
            or_members_.push_back(id);
          }
          break;
        case Kind::Imp:
          if (nd.left >= 0 && nd.right >= 0) {
            imp_by_ante_[nd.left].push_back(id);
            imp_at_.emplace(pack(nd.left, nd.right), id);
          }
          break;
        case Kind::Prov:
          if (nd.left >= 0) prov_of_[nd.left] = id;
          break;
        default:
          break;
      }
    }

    // Definitional unfold edges, both directions.
    for (int id = 0; id < n; id++) {
      for (const std::string& name : referenced_names(nodes_[id].f)) {
        if (!env_.contains(name)) continue;
        FormulaPtr g = unfold_once(nodes_[id].f, env_, name);
        int gid = id_of(g);
        if (gid >= 0 && gid != id) {
          unfold_nbrs_[id].push_back(gid);
          unfold_nbrs_[gid].push_back(id);
        }
      }
    }
    for (auto& v : unfold_nbrs_) {
      std::sort(v.begin(), v.end());
      v.erase(std::unique(v.begin(), v.end()), v.end());
    }

    prov_and_rows_.resize(n);
    for (int id = 0; id < n; id++) {
      const Node& nd = nodes_[id];
      if (nd.f->kind() != Kind::And || prov_of_[id] < 0) continue;
      if (nd.left < 0 || nd.right < 0) continue;
      int pl = prov_of_[nd.left], pr = prov_of_[nd.right];
      if (pl < 0 || pr < 0) continue;
      prov_and_rows_[nd.left].push_back({prov_of_[id], pr, true});
      if (nd.right != nd.left) prov_and_rows_[nd.right].push_back({prov_of_[id], pl, false});
    }

    for (int id = 0; id < n; id++) match_shapes(id);

    // Static hypothesis candidates: antecedents of universe implications.
    // Hypothetical search over every antecedent is quadratic in the universe,
    // so candidates are capped at half the formula-size bound; disjunction
    // components picked up during sweeps are exempt.
    int hyp_cap = std::max(4, bounds_.formula_size / 2);
    for (int id = 0; id < n; id++)
      if (nodes_[id].f->kind() == Kind::Imp && nodes_[id].left >= 0 &&
          nodes_[nodes_[id].left].f->size() <= hyp_cap)
        hyp_candidates_.push_back(nodes_[id].left);
    std::sort(hyp_candidates_.begin(), hyp_candidates_.end());
    hyp_candidates_.erase(std::unique(hyp_candidates_.begin(), hyp_candidates_.end()),
                          hyp_candidates_.end());
  }

  bool is_prov(int id) const { return id >= 0 && nodes_[id].f->kind() == Kind::Prov; }

  void match_shapes(int id) {
    const Node& nd = nodes_[id];
    if (nd.f->kind() == Kind::Or) {
      // lem shape: A | ~A
      if (equal(nd.f->right(), neg(nd.f->left()))) lem_members_.push_back(id);
      return;
    }
    if (nd.f->kind() != Kind::Imp || nd.left < 0 || nd.right < 0) return;
    const Node& l = nodes_[nd.left];
    const Node& r = nodes_[nd.right];

    // S1: a -> Prov(a)
    if (is_prov(nd.right) && r.left == nd.left)
      shapes_[id].push_back({SchemeId::S1, nd.left, -1, -1});
    // Refl: Prov(a) -> a
    if (is_prov(nd.left) && l.left == nd.right)
      shapes_[id].push_back({SchemeId::Refl, nd.right, -1, -1});

    // S2a: Prov(a) & Prov(b) -> Prov(a & b)
    if (l.f->kind() == Kind::And && is_prov(l.left) && is_prov(l.right) && is_prov(nd.right) &&
        r.left >= 0 && nodes_[r.left].f->kind() == Kind::And &&
        nodes_[r.left].left == nodes_[l.left].left && nodes_[r.left].right == nodes_[l.right].left)
      shapes_[id].push_back({SchemeId::S2a, nodes_[l.left].left, nodes_[l.right].left, -1});

    // S2b: Prov(a & b) -> Prov(a) & Prov(b)
    if (is_prov(nd.left) && l.left >= 0 && nodes_[l.left].f->kind() == Kind::And &&
        r.f->kind() == Kind::And && is_prov(r.left) && is_prov(r.right) &&
        nodes_[r.left].left == nodes_[l.left].left && nodes_[r.right].left == nodes_[l.left].right)
      shapes_[id].push_back({SchemeId::S2b, nodes_[l.left].left, nodes_[l.left].right, -1});

    // S3: Prov(a) | Prov(b) -> Prov(a | b)
    if (l.f->kind() == Kind::Or && is_prov(l.left) && is_prov(l.right) && is_prov(nd.right) &&
        r.left >= 0 && nodes_[r.left].f->kind() == Kind::Or &&
        nodes_[r.left].left == nodes_[l.left].left && nodes_[r.left].right == nodes_[l.right].left)
      shapes_[id].push_back({SchemeId::S3, nodes_[l.left].left, nodes_[l.right].left, -1});

    // S5: Prov(a) & Prov(a -> b) -> Prov(b)
    if (l.f->kind() == Kind::And && is_prov(l.left) && is_prov(l.right) && is_prov(nd.right)) {
      int a = nodes_[l.left].left;
      int ab = nodes_[l.right].left;
      if (a >= 0 && ab >= 0 && nodes_[ab].f->kind() == Kind::Imp && nodes_[ab].left == a &&
          nodes_[ab].right == r.left)
        shapes_[id].push_back({SchemeId::S5, a, r.left, -1});
    }

    // S4: Prov(a | b) & Prov(a -> c) & Prov(b -> c) -> Prov(c), & left-nested
    if (l.f->kind() == Kind::And && is_prov(l.right) && l.left >= 0 &&
        nodes_[l.left].f->kind() == Kind::And && is_prov(nd.right)) {
      const Node& inner = nodes_[l.left];
      if (is_prov(inner.left) && is_prov(inner.right)) {
        int orid = nodes_[inner.left].left;
        int ac = nodes_[inner.right].left;
        int bc = nodes_[l.right].left;
        int c = r.left;
        if (orid >= 0 && ac >= 0 && bc >= 0 && nodes_[orid].f->kind() == Kind::Or &&
            nodes_[ac].f->kind() == Kind::Imp && nodes_[bc].f->kind() == Kind::Imp &&
            nodes_[ac].left == nodes_[orid].left && nodes_[bc].left == nodes_[orid].right &&
            nodes_[ac].right == c && nodes_[bc].right == c)
          shapes_[id].push_back({SchemeId::S4, nodes_[orid].left, nodes_[orid].right, c});
      }
    }
  }

  // --- derived-set state -----------------------------------------------

  bool in(int id) const {
    if (id < 0) return false;
    return top_in_[id] || (scoped_ && sub_mark_[id] == epoch_);
  }

  void add(int id, Deriv d) {
    if (id < 0 || in(id)) return;
    d.seq = add_counter_++;
    if (scoped_) {
      sub_mark_[id] = epoch_;
      cur_scope_->derivs.emplace(id, std::move(d));
    } else {
      top_in_[id] = 1;
      derived_count_++;
      top_derivs_.emplace(id, std::move(d));
    }
    work_.push_back(id);
  }

  void seed_axioms() {
    for (size_t id = 0; id < nodes_.size(); id++) {
      if (cfg_.prov_axioms || cfg_.reflection) {
        for (const AxShape& s : shapes_[id]) {
          bool enabled = s.scheme == SchemeId::Refl ? cfg_.reflection : cfg_.prov_axioms;
          if (enabled) {
            Deriv d;
            d.via = Via::AxShape;
            d.scheme = s.scheme;
            d.p1 = s.a;
            d.p2 = s.b;
            d.p3 = s.c;
            add(static_cast<int>(id), d);
            break;
          }
        }
      }
    }
    if (cfg_.excluded_middle)
      for (int id : lem_members_) add(id, Deriv{Via::Lem});
  }

  void propagate() {
    while (!work_.empty()) {
      int f = work_.front();
      work_.pop_front();
      on_add(f);
    }
  }

  void on_add(int f) {
    const Node& n = nodes_[f];

    if (n.f->kind() == Kind::And) {
      add(n.left, Deriv{Via::AndE1, f});
      add(n.right, Deriv{Via::AndE2, f});
    }
    if (n.f->kind() == Kind::Imp && in(n.left))
      add(n.right, Deriv{Via::ImpE, n.left, f});
    for (int imp_id : imp_by_ante_[f])
      if (in(imp_id)) add(nodes_[imp_id].right, Deriv{Via::ImpE, f, imp_id});

    // The introduction rules fan out across the whole universe, which is fine
    // once at the top level but ruinous inside the per-hypothesis
    // sub-saturations; hypothetical reasoning keeps eliminations, definitional
    // steps and the provability schemes.
    if (!scoped_) {
      for (auto [and_id, other] : and_parents_[f])
        if (in(other)) add(and_id, Deriv{Via::AndI, nodes_[and_id].left, nodes_[and_id].right});
      for (auto [or_id, side] : or_parents_[f])
        add(or_id, Deriv{side == 0 ? Via::OrI1 : Via::OrI2, f});
    }

    for (int nb : unfold_nbrs_[f]) add(nb, Deriv{Via::Def, f});

    if (cfg_.ex_falso && f == falsum_ && !scoped_) {
      // Top-level explosion: everything in the universe becomes a theorem.
      for (int id = 0; id < static_cast<int>(nodes_.size()); id++)
        add(id, Deriv{Via::Efq, falsum_});
    }

    if (!cfg_.prov_axioms) return;

    if (prov_of_[f] >= 0) add(prov_of_[f], Deriv{Via::Necess, f});

    if (n.f->kind() != Kind::Prov) return;
    int x = n.left;
    const Node& xn = nodes_[x];

    if (cfg_.reflection) add(x, Deriv{Via::Refl, f});

    if (xn.f->kind() == Kind::And) {
      if (prov_of_[xn.left] >= 0) add(prov_of_[xn.left], Deriv{Via::ProvSplit1, f});
      if (prov_of_[xn.right] >= 0) add(prov_of_[xn.right], Deriv{Via::ProvSplit2, f});
    }

    // S2a: join with any established Prov across a universe conjunction.
    for (const auto& [pand, pother, is_left] : prov_and_rows_[x]) {
      if (!in(pother)) continue;
      if (is_left)
        add(pand, Deriv{Via::ProvAnd, f, pother});
      else
        add(pand, Deriv{Via::ProvAnd, pother, f});
    }

    // S3: lift into any universe disjunction over x (top level only; see above).
    if (!scoped_) {
      for (auto [or_id, side] : or_parents_[x])
        if (prov_of_[or_id] >= 0)
          add(prov_of_[or_id], Deriv{side == 0 ? Via::ProvOr1 : Via::ProvOr2, f});
    }

    // S5 in both premise orders.
    if (xn.f->kind() == Kind::Imp) {
      int pa = prov_of_[xn.left];
      if (pa >= 0 && in(pa) && prov_of_[xn.right] >= 0)
        add(prov_of_[xn.right], Deriv{Via::ProvMp, pa, f});
    }
    for (int imp_id : imp_by_ante_[x]) {
      int pi = prov_of_[imp_id];
      if (pi >= 0 && in(pi) && prov_of_[nodes_[imp_id].right] >= 0)
        add(prov_of_[nodes_[imp_id].right], Deriv{Via::ProvMp, f, pi});
    }

    // S4: f = Prov(a | b) with both case implications available.
    if (xn.f->kind() == Kind::Or) {
      int a = xn.left, b = xn.right;
      for (int imp_a : imp_by_ante_[a]) {
        int pa = prov_of_[imp_a];
        if (pa < 0 || !in(pa)) continue;
        int c = nodes_[imp_a].right;
        auto it = imp_at_.find(pack(b, c));
        if (it == imp_at_.end()) continue;
        int pb = prov_of_[it->second];
        if (pb >= 0 && in(pb) && prov_of_[c] >= 0)
          add(prov_of_[c], Deriv{Via::ProvCase, f, pa, pb});
      }
    }
    // S4: f = Prov(a -> c) joining an established disjunction.
    if (xn.f->kind() == Kind::Imp) {
      int a = xn.left, c = xn.right;
      for (auto [or_id, side] : or_parents_[a]) {
        int po = prov_of_[or_id];
        if (po < 0 || !in(po)) continue;
        int other = side == 0 ? nodes_[or_id].right : nodes_[or_id].left;
        auto it = imp_at_.find(pack(other, c));
        if (it == imp_at_.end()) continue;
        int pother = prov_of_[it->second];
        if (pother < 0 || !in(pother) || prov_of_[c] < 0) continue;
        if (side == 0)
          add(prov_of_[c], Deriv{Via::ProvCase, po, f, pother});
        else
          add(prov_of_[c], Deriv{Via::ProvCase, po, pother, f});
      }
    }
  }

  // One hypothetical sweep: a sub-saturation per candidate hypothesis, then
  // impI and orE conclusions folded back into the top level.
  void sweep() {
    std::vector<int> hyps = hyp_candidates_;
    for (int or_id : or_members_) {
      if (!top_in_[or_id]) continue;
      hyps.push_back(nodes_[or_id].left);
      hyps.push_back(nodes_[or_id].right);
    }
    std::sort(hyps.begin(), hyps.end());
    hyps.erase(std::unique(hyps.begin(), hyps.end()), hyps.end());

    std::map<int, std::shared_ptr<const Scope>> scopes;
    std::vector<std::pair<int, Deriv>> pending;

    for (int h : hyps) {
      epoch_++;
      Scope scope;
      scope.hyp = h;
      scoped_ = true;
      cur_scope_ = &scope;
      add(h, Deriv{Via::Assume});
      propagate();
      if (cfg_.ex_falso && falsum_ >= 0 && in(falsum_) && !top_in_[falsum_]) scope.absurd = true;
      scope.capture_seq = add_counter_;
      scoped_ = false;
      cur_scope_ = nullptr;

      auto shared = std::make_shared<const Scope>(std::move(scope));
      scopes.emplace(h, shared);

      for (const auto& [g, _] : shared->derivs) {
        auto it = imp_at_.find(pack(h, g));
        if (it != imp_at_.end() && !top_in_[it->second]) {
          Deriv d;
          d.via = Via::ImpIntro;
          d.p1 = h;
          d.p2 = g;
          d.subL = shared;
          pending.emplace_back(it->second, std::move(d));
        }
      }
      // Weakening: a consequent already established outright gives h -> t with
      // a vacuous discharge. Absurd scopes give every consequent in reach.
      for (int imp_id : imp_by_ante_[h]) {
        if (top_in_[imp_id]) continue;
        int g = nodes_[imp_id].right;
        if (!top_in_[g] && !shared->absurd) continue;
        Deriv d;
        d.via = Via::ImpIntro;
        d.p1 = h;
        d.p2 = g;
        d.subL = shared;
        pending.emplace_back(imp_id, std::move(d));
      }
    }

    for (auto& [id, d] : pending) add(id, std::move(d));
    propagate();

    // orE: a derived disjunction whose both branches yield g gives g.
    for (int or_id : or_members_) {
      if (!top_in_[or_id]) continue;
      auto ia = scopes.find(nodes_[or_id].left);
      auto ib = scopes.find(nodes_[or_id].right);
      if (ia == scopes.end() || ib == scopes.end()) continue;
      const auto& sa = ia->second;
      const auto& sb = ib->second;
      auto emit = [&](int g) {
        Deriv d;
        d.via = Via::OrCase;
        d.p1 = or_id;
        d.p2 = g;
        d.subL = sa;
        d.subR = sb;
        add(g, std::move(d));
      };
      if (sa->absurd && sb->absurd) {
        for (int id = 0; id < static_cast<int>(nodes_.size()); id++) emit(id);
      } else if (sa->absurd) {
        for (const auto& [g, _] : sb->derivs) emit(g);
      } else if (sb->absurd) {
        for (const auto& [g, _] : sa->derivs) emit(g);
      } else {
        for (const auto& [g, _] : sa->derivs)
          if (sb->derivs.count(g)) emit(g);
      }
    }
    propagate();
  }

  // --- data --------------------------------------------------------------

  LogicConfig cfg_;
  DefEnv env_;
  SearchBounds bounds_;

  std::vector<Node> nodes_;
  std::unordered_map<std::string, int> key2id_;
  int falsum_ = -1;

  std::vector<std::vector<std::pair<int, int>>> and_parents_; // child -> (and id, other child)
  std::vector<std::vector<std::pair<int, int>>> or_parents_;  // child -> (or id, side)
  std::vector<std::vector<int>> imp_by_ante_;
  std::unordered_map<uint64_t, int> and_at_, imp_at_;
  std::vector<int> prov_of_;
  std::vector<std::vector<int>> unfold_nbrs_;
  // per quoted formula x: (Prov(x&y) id, Prov(y) id, x-on-the-left)
  struct ProvAndRow { int pand; int pother; bool is_left; };
  std::vector<std::vector<ProvAndRow>> prov_and_rows_;
  std::vector<std::vector<AxShape>> shapes_;
  std::vector<int> lem_members_;
  std::vector<int> or_members_;
  std::vector<int> hyp_candidates_;

  std::vector<char> top_in_;
  std::map<int, Deriv> top_derivs_;
  size_t derived_count_ = 0;
  int add_counter_ = 0;

  std::vector<int> sub_mark_;
  int epoch_ = 0;
  bool scoped_ = false;
  Scope* cur_scope_ = nullptr;

  std::deque<int> work_;

  int rounds_ = 0;
  bool saturated_ = false;
};

} // namespace

bool SaturationResult::contains(const FormulaPtr& f) const {
  return witnesses && witnesses->id_of(f) >= 0 &&
         witnesses->top.count(witnesses->id_of(f)) > 0;
}

SaturationResult saturate(const std::vector<FormulaPtr>& universe, const LogicConfig& config,
                          const DefEnv& env, const SearchBounds& b) {
  b.validate();
  Engine engine(universe, config, env, b);
  engine.run();
  return engine.finish();
}

namespace {

// Rebuilds a linear proof script from the witness DAG. Top-level derivations
// are shared; hypothetical derivations are replayed inside their own
// assume/discharge block.
class Emitter {
 public:
  explicit Emitter(const WitnessStore& w) : w_(w) {}

  std::optional<ProofScript> build(const FormulaPtr& goal) {
    int id = w_.id_of(goal);
    if (id < 0 || !w_.top.count(id)) return std::nullopt;
    int last = emit_top(id);
    ProofScript script;
    script.env = w_.env;
    script.config = w_.config;
    script.goal = Sequent{{}, w_.nodes[id].f};
    script.steps = std::move(steps_);
    if (last != static_cast<int>(script.steps.size())) {
      // The goal step was memoized mid-script; restate it once at the end.
      ProofStep restate;
      restate.index = static_cast<int>(script.steps.size()) + 1;
      restate.rule = RuleId::Def;
      restate.premises = {last};
      restate.formula = w_.nodes[id].f;
      script.steps.push_back(std::move(restate));
    }
    return script;
  }

 private:
  const FormulaPtr& formula(int id) const { return w_.nodes[id].f; }

  int push(RuleId rule, std::vector<int> premises, FormulaPtr f, Subst subst = {},
           std::optional<int> discharge = std::nullopt) {
    ProofStep s;
    s.index = static_cast<int>(steps_.size()) + 1;
    s.rule = rule;
    s.premises = std::move(premises);
    s.formula = std::move(f);
    s.subst = std::move(subst);
    s.discharge = discharge;
    steps_.push_back(std::move(s));
    return steps_.back().index;
  }

  int emit_top(int id) {
    auto memo = top_memo_.find(id);
    if (memo != top_memo_.end()) return memo->second;
    auto it = w_.top.find(id);
    if (it == w_.top.end()) throw Error("missing witness for " + formula(id)->text());
    if (!emitting_.insert(id).second)
      throw Error("cyclic witness at " + formula(id)->text());
    int step = emit_deriv(id, it->second, nullptr, nullptr);
    emitting_.erase(id);
    top_memo_.emplace(id, step);
    return step;
  }

  // Scope-local derivations take precedence, and a top-level derivation is
  // only borrowed when it was already fixed at the scope's capture point;
  // anything stamped later may depend on this very scope's conclusion.
  int emit_scoped(int id, const Scope& scope, std::unordered_map<int, int>& memo) {
    auto hit = memo.find(id);
    if (hit != memo.end()) return hit->second;
    int step;
    auto top = w_.top.find(id);
    if (auto it = scope.derivs.find(id); it != scope.derivs.end()) {
      step = emit_deriv(id, it->second, &scope, &memo);
    } else if (top != w_.top.end() && top->second.seq < scope.capture_seq) {
      step = emit_top(id); // context-free proof, reusable inside the scope
    } else if (scope.absurd) {
      int fstep = emit_scoped(w_.falsum_id, scope, memo);
      step = push(RuleId::Efq, {fstep}, formula(id));
    } else {
      throw Error("missing scoped witness for " + formula(id)->text());
    }
    memo.emplace(id, step);
    return step;
  }

  int resolve(int id, const Scope* scope, std::unordered_map<int, int>* memo) {
    if (scope && memo) return emit_scoped(id, *scope, *memo);
    return emit_top(id);
  }

  int emit_deriv(int id, const Deriv& d, const Scope* scope, std::unordered_map<int, int>* memo) {
    auto P = [](const FormulaPtr& f) { return Formula::prov(f); };
    const FormulaPtr& f = formula(id);
    switch (d.via) {
      case Via::Assume:
        return push(RuleId::Hyp, {}, f);
      case Via::AxShape: {
        Subst subst{{"A", formula(d.p1)}};
        RuleId rule = RuleId::AxS1;
        switch (d.scheme) {
          case SchemeId::S1: rule = RuleId::AxS1; break;
          case SchemeId::S2a: rule = RuleId::AxS2a; subst["B"] = formula(d.p2); break;
          case SchemeId::S2b: rule = RuleId::AxS2b; subst["B"] = formula(d.p2); break;
          case SchemeId::S3: rule = RuleId::AxS3; subst["B"] = formula(d.p2); break;
          case SchemeId::S4:
            rule = RuleId::AxS4;
            subst["B"] = formula(d.p2);
            subst["C"] = formula(d.p3);
            break;
          case SchemeId::S5: rule = RuleId::AxS5; subst["B"] = formula(d.p2); break;
          case SchemeId::Refl: rule = RuleId::AxRefl; break;
        }
        return push(rule, {}, f, std::move(subst));
      }
      case Via::Lem:
        return push(RuleId::Lem, {}, f);
      case Via::AndI:
        return push(RuleId::AndI, {resolve(d.p1, scope, memo), resolve(d.p2, scope, memo)}, f);
      case Via::AndE1:
        return push(RuleId::AndE1, {resolve(d.p1, scope, memo)}, f);
      case Via::AndE2:
        return push(RuleId::AndE2, {resolve(d.p1, scope, memo)}, f);
      case Via::OrI1:
        return push(RuleId::OrI1, {resolve(d.p1, scope, memo)}, f);
      case Via::OrI2:
        return push(RuleId::OrI2, {resolve(d.p1, scope, memo)}, f);
      case Via::ImpE:
        return push(RuleId::ImpE, {resolve(d.p1, scope, memo), resolve(d.p2, scope, memo)}, f);
      case Via::Def:
        return push(RuleId::Def, {resolve(d.p1, scope, memo)}, f);
      case Via::Efq:
        return push(RuleId::Efq, {resolve(d.p1, scope, memo)}, f);
      case Via::Necess: {
        int sx = resolve(d.p1, scope, memo);
        const FormulaPtr& x = formula(d.p1);
        int ax = push(RuleId::AxS1, {}, Formula::imp(x, P(x)), {{"A", x}});
        return push(RuleId::ImpE, {sx, ax}, f);
      }
      case Via::ProvAnd: {
        int s1 = resolve(d.p1, scope, memo);
        int s2 = resolve(d.p2, scope, memo);
        const FormulaPtr& pa = formula(d.p1);
        const FormulaPtr& pb = formula(d.p2);
        FormulaPtr a = pa->quoted(), b = pb->quoted();
        int sand = push(RuleId::AndI, {s1, s2}, Formula::conj(pa, pb));
        int ax = push(RuleId::AxS2a, {},
                      Formula::imp(Formula::conj(pa, pb), P(Formula::conj(a, b))),
                      {{"A", a}, {"B", b}});
        return push(RuleId::ImpE, {sand, ax}, f);
      }
      case Via::ProvSplit1:
      case Via::ProvSplit2: {
        int sp = resolve(d.p1, scope, memo);
        FormulaPtr both = formula(d.p1)->quoted(); // a & b
        FormulaPtr a = both->left(), b = both->right();
        FormulaPtr pair = Formula::conj(P(a), P(b));
        int ax = push(RuleId::AxS2b, {}, Formula::imp(formula(d.p1), pair), {{"A", a}, {"B", b}});
        int sboth = push(RuleId::ImpE, {sp, ax}, pair);
        return push(d.via == Via::ProvSplit1 ? RuleId::AndE1 : RuleId::AndE2, {sboth}, f);
      }
      case Via::ProvOr1:
      case Via::ProvOr2: {
        int sp = resolve(d.p1, scope, memo);
        FormulaPtr both = f->quoted(); // a | b
        FormulaPtr a = both->left(), b = both->right();
        FormulaPtr pair = Formula::disj(P(a), P(b));
        int sor = push(d.via == Via::ProvOr1 ? RuleId::OrI1 : RuleId::OrI2, {sp}, pair);
        int ax = push(RuleId::AxS3, {}, Formula::imp(pair, f), {{"A", a}, {"B", b}});
        return push(RuleId::ImpE, {sor, ax}, f);
      }
      case Via::ProvCase: {
        int s1 = resolve(d.p1, scope, memo);
        int s2 = resolve(d.p2, scope, memo);
        int s3 = resolve(d.p3, scope, memo);
        FormulaPtr por = formula(d.p1);
        FormulaPtr pac = formula(d.p2);
        FormulaPtr pbc = formula(d.p3);
        FormulaPtr a = por->quoted()->left(), b = por->quoted()->right();
        FormulaPtr c = f->quoted();
        int and1 = push(RuleId::AndI, {s1, s2}, Formula::conj(por, pac));
        int and2 = push(RuleId::AndI, {and1, s3},
                        Formula::conj(Formula::conj(por, pac), pbc));
        int ax = push(RuleId::AxS4, {},
                      Formula::imp(Formula::conj(Formula::conj(por, pac), pbc), f),
                      {{"A", a}, {"B", b}, {"C", c}});
        return push(RuleId::ImpE, {and2, ax}, f);
      }
      case Via::ProvMp: {
        int s1 = resolve(d.p1, scope, memo);
        int s2 = resolve(d.p2, scope, memo);
        FormulaPtr pa = formula(d.p1);
        FormulaPtr pab = formula(d.p2);
        FormulaPtr a = pa->quoted();
        FormulaPtr b = f->quoted();
        int sand = push(RuleId::AndI, {s1, s2}, Formula::conj(pa, pab));
        int ax = push(RuleId::AxS5, {}, Formula::imp(Formula::conj(pa, pab), f),
                      {{"A", a}, {"B", b}});
        return push(RuleId::ImpE, {sand, ax}, f);
      }
      case Via::Refl: {
        int sp = resolve(d.p1, scope, memo);
        int ax = push(RuleId::AxRefl, {}, Formula::imp(formula(d.p1), f), {{"A", f}});
        return push(RuleId::ImpE, {sp, ax}, f);
      }
      case Via::ImpIntro: {
        std::unordered_map<int, int> local;
        int sg = emit_scoped(d.p2, *d.subL, local);
        std::optional<int> discharge;
        auto sd = d.subL->derivs.find(d.p1);
        if (sd != d.subL->derivs.end() && sd->second.via == Via::Assume) {
          auto assume = local.find(d.p1);
          if (assume != local.end()) discharge = assume->second;
        }
        return push(RuleId::ImpI, {sg}, f, {}, discharge);
      }
      case Via::OrCase: {
        int so = emit_top(d.p1);
        std::unordered_map<int, int> memoA, memoB;
        int sa = emit_scoped(d.p2, *d.subL, memoA);
        int sb = emit_scoped(d.p2, *d.subR, memoB);
        return push(RuleId::OrE, {so, sa, sb}, f);
      }
    }
    throw Error("unreachable");
  }

  const WitnessStore& w_;
  std::vector<ProofStep> steps_;
  std::unordered_map<int, int> top_memo_;
  std::unordered_set<int> emitting_;
};

} // namespace

std::optional<ProofScript> witness_script(const SaturationResult& result, const FormulaPtr& goal) {
  if (!result.witnesses) return std::nullopt;
  return Emitter(*result.witnesses).build(goal);
}

std::optional<ProofScript> prove_bounded(const FormulaPtr& goal, const LogicConfig& config,
                                         const DefEnv& env, const SearchBounds& b) {
  std::vector<FormulaPtr> universe = build_universe({goal}, env, b);
  SaturationResult result = saturate(universe, config, env, b);
  auto script = witness_script(result, goal);
  if (script) {
    CheckResult check = check_script(*script);
    if (!check.ok)
      throw Error("internal: reconstructed witness rejected: " + check.error->message());
  }
  return script;
}

} // namespace ht
