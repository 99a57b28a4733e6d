#include "holmatch/matcher.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <unordered_set>

#include "holmatch/errors.hpp"
#include "holmatch/term.hpp"
#include "holmatch/type.hpp"
#include "holmatch/util.hpp"

namespace holmatch {

namespace {

std::string fresh_const_name(size_t k) {
  return std::string("\xc2\xb5.defined.") + std::to_string(k);
}

std::string fresh_type_name(size_t j) {
  return std::string("\xc2\xb5.deftype.") + std::to_string(j);
}

uint64_t pair_key(Symbol a, Symbol b) {
  return (uint64_t(a) << 32) | uint64_t(b);
}

bool vec_contains(const std::vector<Symbol>& v, Symbol s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

// True if the term mentions a constant outside `defined`.  A statement that
// fails this test abstracts to nothing, so its normalization can be skipped.
bool mentions_undefined(const TermPtr& t,
                        const std::unordered_set<Symbol>& defined) {
  switch (t->kind()) {
    case TermKind::Const:
      return defined.count(t->sym()) == 0;
    case TermKind::Bound:
      return false;
    case TermKind::Abs:
      return mentions_undefined(t->body(), defined);
    case TermKind::App:
      return mentions_undefined(t->fun(), defined) ||
             mentions_undefined(t->arg(), defined);
  }
  return false;
}

double g_tm_norm = 0, g_tm_pat = 0;  // TEMP

// One side's index maintained under theorem rewrites.  Contributions are the
// per-theorem (constant, rel-id) hits; pset/cset hold reference counts so a
// rewrite can retract one theorem's contribution exactly.  Constants also get
// dense per-side ids (cids) so the scorer can address candidate pairs by
// integer coordinates.
class DynamicIndex {
 public:
  // Cset membership for one rel id: reference counts per constant plus the
  // member cids as a flat list the scorer scans.  Slots remember their list
  // position so retraction is a swap-remove.
  struct CsetEntry {
    struct Slot {
      int count = 0;
      uint32_t pos = 0;
    };
    std::unordered_map<Symbol, Slot> members;
    std::vector<uint32_t> cids;  // unordered
  };

  DynamicIndex(Library* lib, const NormConfig* cfg, PatternInterner* interner,
               int jobs)
      : lib_(lib), cfg_(cfg), interner_(interner), jobs_(jobs) {}

  void build(NormStats* stats) {
    size_t n = lib_->theorems.size();
    contributions_.assign(n, {});
    pset_counts_.clear();
    csets_.clear();
    cid_of_.clear();
    sym_of_cid_.clear();
    npat_by_cid_.clear();
    occ_.clear();
    std::vector<std::vector<RawEntry>> raw(n);
    std::vector<NormStats> local_stats(n);
    parallel_for(n, jobs_, [&](size_t begin, size_t end) {
      for (size_t i = begin; i < end; ++i)
        raw[i] = raw_patterns(lib_->theorems[i], &local_stats[i]);
    });
    if (stats)
      for (NormStats& ls : local_stats)
        for (std::string& line : ls.skipped_distributions)
          stats->skipped_distributions.push_back(std::move(line));
    // Intern in theorem order so ids do not depend on the job count.
    for (size_t i = 0; i < n; ++i) {
      add_contribution(i, raw[i], nullptr);
      for (Symbol c : constants_in_order(lib_->theorems[i].statement))
        occ_[c].push_back(i);
    }
  }

  // Re-derives the given theorems' contributions and returns the rel ids
  // whose cset membership changed, ascending and deduplicated.
  std::vector<uint32_t> refresh(const std::vector<size_t>& thm_indices,
                                NormStats* stats) {
    // Normalization is pure, so re-derivation runs in parallel; interning
    // stays in the serial loop below so ids do not depend on the job count.
    size_t m = thm_indices.size();
    std::vector<std::vector<RawEntry>> raw(m);
    std::vector<NormStats> local_stats(m);
    parallel_for(m, jobs_, [&](size_t begin, size_t end) {
      for (size_t j = begin; j < end; ++j)
        raw[j] = raw_patterns(lib_->theorems[thm_indices[j]], &local_stats[j]);
    });
    if (stats)
      for (NormStats& ls : local_stats)
        for (std::string& line : ls.skipped_distributions)
          stats->skipped_distributions.push_back(std::move(line));
    std::vector<uint32_t> changed;
    for (size_t j = 0; j < m; ++j) {
      size_t i = thm_indices[j];
      remove_contribution(i, &changed);
      add_contribution(i, raw[j], &changed);
    }
    std::sort(changed.begin(), changed.end());
    changed.erase(std::unique(changed.begin(), changed.end()), changed.end());
    return changed;
  }

  PatternIndex snapshot() const {
    PatternIndex out;
    out.library = lib_->name;
    for (const auto& [c, entry] : pset_counts_) {
      if (entry.rids.empty()) continue;
      out.pset.emplace(c, entry.rids);  // already ascending
      out.npatterns.emplace(c, static_cast<uint32_t>(entry.rids.size()));
      out.constants.push_back(c);
    }
    std::sort(out.constants.begin(), out.constants.end(), sym_less);
    for (uint32_t rid = 0; rid < csets_.size(); ++rid) {
      const CsetEntry& ce = csets_[rid];
      if (ce.cids.empty()) continue;
      auto& v = out.cset[rid];
      v.reserve(ce.cids.size());
      for (uint32_t cid : ce.cids) v.push_back(sym_of_cid_[cid]);
      std::sort(v.begin(), v.end(), sym_less);
    }
    return out;
  }

  size_t cset_size(uint32_t rid) const {
    return rid < csets_.size() ? csets_[rid].cids.size() : 0;
  }

  const CsetEntry* cset_entry(uint32_t rid) const {
    if (rid >= csets_.size() || csets_[rid].cids.empty()) return nullptr;
    return &csets_[rid];
  }

  size_t ncids() const { return sym_of_cid_.size(); }
  size_t nrids() const { return csets_.size(); }
  Symbol sym_of_cid(uint32_t cid) const { return sym_of_cid_[cid]; }
  uint32_t npat_of_cid(uint32_t cid) const { return npat_by_cid_[cid]; }

  const std::vector<size_t>& occurrences(Symbol c) const {
    static const std::vector<size_t> kEmpty;
    auto it = occ_.find(c);
    return it == occ_.end() ? kEmpty : it->second;
  }

  void move_occurrences(Symbol from, Symbol to) {
    auto it = occ_.find(from);
    if (it == occ_.end()) return;
    auto& dst = occ_[to];
    std::vector<size_t> merged;
    std::set_union(dst.begin(), dst.end(), it->second.begin(), it->second.end(),
                   std::back_inserter(merged));
    dst = std::move(merged);
    occ_.erase(from);
  }

 private:
  struct RawEntry {
    Symbol constant;
    std::string body;
    uint32_t arity;
    uint32_t index;
  };

  std::vector<RawEntry> raw_patterns(const Theorem& thm, NormStats* stats) {
    std::vector<RawEntry> out;
    // A statement over defined constants only abstracts to nothing, so the
    // normalization pipeline is skipped outright.
    if (!mentions_undefined(thm.statement, lib_->defined_constants))
      return out;
    auto tn0 = std::chrono::steady_clock::now();  // TEMP
    std::vector<TermPtr> pieces =
        normalize(thm.statement, *cfg_, sym_name(thm.name), stats);
    auto tn1 = std::chrono::steady_clock::now();  // TEMP
    g_tm_norm += std::chrono::duration<double>(tn1 - tn0).count();  // TEMP
    for (const TermPtr& piece : pieces)
      for (const RelPatternEntry& e :
           relative_patterns(piece, lib_->defined_constants))
        out.push_back(
            {e.constant, e.pattern.canonical_body, e.pattern.arity, e.index});
    g_tm_pat += std::chrono::duration<double>(  // TEMP
        std::chrono::steady_clock::now() - tn1).count();  // TEMP
    return out;
  }

  uint32_t cid_for(Symbol c) {
    auto [it, fresh] = cid_of_.try_emplace(c, uint32_t(sym_of_cid_.size()));
    if (fresh) {
      sym_of_cid_.push_back(c);
      npat_by_cid_.push_back(0);
    }
    return it->second;
  }

  void add_contribution(size_t i, const std::vector<RawEntry>& raw,
                        std::vector<uint32_t>* changed) {
    auto& contrib = contributions_[i];
    contrib.clear();
    for (const RawEntry& e : raw) {
      uint32_t pid = interner_->pattern_id(e.body, e.arity);
      uint32_t rid = interner_->rel_id(pid, e.index);
      contrib.push_back({e.constant, rid});
      uint32_t cid = cid_for(e.constant);
      PsetEntry& pe = pset_counts_[e.constant];
      int& pc = pe.counts[rid];
      if (pc == 0) {
        pe.rids.insert(
            std::lower_bound(pe.rids.begin(), pe.rids.end(), rid), rid);
        ++npat_by_cid_[cid];
      }
      ++pc;
      if (rid >= csets_.size()) csets_.resize(rid + 1);
      CsetEntry& ce = csets_[rid];
      CsetEntry::Slot& slot = ce.members[e.constant];
      if (slot.count == 0) {
        slot.pos = uint32_t(ce.cids.size());
        ce.cids.push_back(cid);
        if (changed) changed->push_back(rid);
      }
      ++slot.count;
    }
  }

  void remove_contribution(size_t i, std::vector<uint32_t>* changed) {
    for (const auto& [c, rid] : contributions_[i]) {
      auto pit = pset_counts_.find(c);
      if (pit != pset_counts_.end()) {
        auto rit = pit->second.counts.find(rid);
        if (rit != pit->second.counts.end() && --rit->second == 0) {
          pit->second.counts.erase(rit);
          auto& rv = pit->second.rids;
          rv.erase(std::lower_bound(rv.begin(), rv.end(), rid));
          --npat_by_cid_[cid_of_.at(c)];
        }
      }
      CsetEntry& ce = csets_[rid];
      auto sit = ce.members.find(c);
      if (sit != ce.members.end() && --sit->second.count == 0) {
        uint32_t p = sit->second.pos;
        uint32_t moved = ce.cids.back();
        ce.cids[p] = moved;
        ce.cids.pop_back();
        if (p != ce.cids.size()) ce.members[sym_of_cid_[moved]].pos = p;
        ce.members.erase(sit);
        if (changed) changed->push_back(rid);
      }
    }
    contributions_[i].clear();
  }

  // Reference counts plus the sorted key vector the snapshot copies; the
  // vector mirrors the counts' key set exactly.
  struct PsetEntry {
    std::unordered_map<uint32_t, int> counts;
    std::vector<uint32_t> rids;  // ascending
  };

  Library* lib_;
  const NormConfig* cfg_;
  PatternInterner* interner_;
  int jobs_;
  std::vector<std::vector<std::pair<Symbol, uint32_t>>> contributions_;
  std::unordered_map<Symbol, PsetEntry> pset_counts_;
  std::vector<CsetEntry> csets_;  // dense by rel id
  std::unordered_map<Symbol, uint32_t> cid_of_;
  std::vector<Symbol> sym_of_cid_;
  std::vector<uint32_t> npat_by_cid_;  // current pset cardinality per cid
  std::unordered_map<Symbol, std::vector<size_t>> occ_;
};

}  // namespace

struct MatchSession::Impl {
  MatchConfig cfg;
  int jobs;
  MatchState state;
  NormConfig norm1, norm2;  // per-side AC lists under level 2
  PatternInterner interner;
  DynamicIndex di1, di2;
  NormStats stats;

  // Candidate pairs carry dense ids (tids), assigned on first contact and
  // never retired; each rel id keeps the flat list of tids its cset product
  // spans.  Scores are never stored across iterations: every pass rebuilds
  // them by scattering per-rel-id weights over these lists in ascending
  // rel-id order, which reproduces the summation order of a from-scratch
  // scoring bit for bit.
  static constexpr uint32_t kNoTid = 0xffffffffu;
  uint32_t n2 = 0;                     // side-2 cid count, the row stride
  std::vector<uint32_t> tid_of;        // [cid1 * n2 + cid2] -> tid
  std::vector<uint32_t> ca_of, cb_of;  // tid -> per-side cids
  // Scatter and argmax touch one random tid per update, so the per-pass
  // accumulator, shared count and rejection mark share one 16-byte cell.
  struct PairCell {
    double acc;       // current-pass score1 sum
    uint32_t shared;  // current-pass shared-pattern count
    uint32_t reject;  // type-rejected during the current step
  };
  std::vector<PairCell> cells;
  std::vector<uint32_t> touched;       // tids hit in the current pass
  std::vector<std::vector<uint32_t>> rid_tids;  // rel id -> pair list
  std::vector<uint32_t> reject_list;
  std::vector<double> logtab;          // npatterns product -> log(2 + p)

  double tm_refresh = 0, tm_scatter = 0, tm_argmax = 0, tm_rebuild = 0,
         tm_accept = 0;  // TEMP
  std::unordered_set<Symbol> matched1, matched2;
  std::unordered_map<Symbol, Symbol> t1map, t2map;  // constructor -> fresh
  std::unordered_set<uint64_t> discarded;
  size_t iters_done = 0;
  bool index_stale = false;  // set by the single-pass walk

  Impl(Library l1, Library l2, MatchConfig c)
      : cfg(std::move(c)),
        jobs(cfg.jobs > 0 ? cfg.jobs : default_jobs()),
        state{{}, {}, std::move(l1), std::move(l2), 0},
        norm1(cfg.norm),
        norm2(cfg.norm),
        di1(&state.lib1, &norm1, &interner, jobs),
        di2(&state.lib2, &norm2, &interner, jobs) {
    if (cfg.mode == MatchConfig::Mode::single_pass && cfg.iterations != 1)
      throw ConfigError("single-pass matching admits exactly one iteration");
    if (cfg.norm.level == 2 && cfg.norm.ac_constants.empty()) {
      norm1.ac_constants = harvest_ac_constants(
          state.lib1, cfg.norm.distribution_size_cap);
      norm2.ac_constants = harvest_ac_constants(
          state.lib2, cfg.norm.distribution_size_cap);
      state.lib1.ac_constants = norm1.ac_constants;
      state.lib2.ac_constants = norm2.ac_constants;
    }
    di1.build(&stats);
    di2.build(&stats);
    reset_pairspace();
    if (std::getenv("HOLMATCH_PROF"))  // TEMP
      std::fprintf(stderr, "ctor: norm=%.3f pat=%.3f\n", g_tm_norm, g_tm_pat);  // TEMP
  }

  // Rewrites only ever introduce defined constants, which never reach a
  // cset, so both sides' cid ranges are fixed once the indices are built.
  void reset_pairspace() {
    n2 = uint32_t(di2.ncids());
    tid_of.assign(di1.ncids() * size_t(n2), kNoTid);
    ca_of.clear();
    cb_of.clear();
    cells.clear();
    touched.clear();
    reject_list.clear();
    rid_tids.assign(std::max(di1.nrids(), di2.nrids()), {});
    for (size_t r = 0; r < rid_tids.size(); ++r) rebuild_rid(uint32_t(r));
  }

  uint32_t tid_for(uint32_t ca, uint32_t cb) {
    uint32_t& t = tid_of[size_t(ca) * n2 + cb];
    if (t == kNoTid) {
      t = uint32_t(ca_of.size());
      ca_of.push_back(ca);
      cb_of.push_back(cb);
      cells.push_back({0.0, 0, 0});
    }
    return t;
  }

  void rebuild_rid(uint32_t r) {
    std::vector<uint32_t>& list = rid_tids[r];
    list.clear();
    const DynamicIndex::CsetEntry* e1 = di1.cset_entry(r);
    const DynamicIndex::CsetEntry* e2 = di2.cset_entry(r);
    if (!e1 || !e2) return;
    for (uint32_t ca : e1->cids)
      for (uint32_t cb : e2->cids) list.push_back(tid_for(ca, cb));
  }

  // One scoring pass: clear the previous pass, then scatter each rel id's
  // weight over its pair list in ascending rel-id order.  Each pair's
  // contributions arrive exactly as a sorted pset intersection would emit
  // them, so the accumulated sums match a direct rescoring bitwise.
  void accumulate() {
    auto t0 = std::chrono::steady_clock::now();
    for (uint32_t t : touched) {
      cells[t].acc = 0.0;
      cells[t].shared = 0;
    }
    touched.clear();
    for (size_t r = 0; r < rid_tids.size(); ++r) {
      const std::vector<uint32_t>& list = rid_tids[r];
      if (list.empty()) continue;
      double w = (1.0 / double(di1.cset_size(uint32_t(r)))) *
                 (1.0 / double(di2.cset_size(uint32_t(r))));
      for (uint32_t t : list) {
        PairCell& c = cells[t];
        if (c.shared++ == 0) touched.push_back(t);
        c.acc += w;
      }
    }
    tm_scatter += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }

  double log_denom(uint64_t prod) {
    if (prod >= (uint64_t(1) << 22)) return std::log(2.0 + double(prod));
    if (prod >= logtab.size()) logtab.resize(prod + 1, 0.0);
    double& v = logtab[prod];
    if (v == 0.0) v = std::log(2.0 + double(prod));
    return v;
  }

  double score_of(uint32_t t) {
    switch (cfg.score.scheme) {
      case Scheme::score0:
        return double(cells[t].shared);
      case Scheme::score1:
        return cells[t].acc;
      case Scheme::score2: {
        // Pset cardinalities stay far below 2^26, so the integer product
        // converts to double exactly.
        uint64_t prod = uint64_t(di1.npat_of_cid(ca_of[t])) *
                        uint64_t(di2.npat_of_cid(cb_of[t]));
        return cells[t].acc / log_denom(prod);
      }
    }
    return 0.0;
  }

  ScoredPair make_scored(uint32_t t) {
    return ScoredPair{di1.sym_of_cid(ca_of[t]), di2.sym_of_cid(cb_of[t]),
                      score_of(t), cells[t].shared};
  }

  // Tie-break on exact score equality follows the ranking's symbol order.
  bool tie_before(uint32_t t, uint32_t u) {
    Symbol a = di1.sym_of_cid(ca_of[t]);
    Symbol b = di1.sym_of_cid(ca_of[u]);
    if (a != b) return sym_less(a, b);
    return sym_less(di2.sym_of_cid(cb_of[t]), di2.sym_of_cid(cb_of[u]));
  }

  // Argmax under ranked_before over this pass's touched pairs.  Matched
  // constants leave every cset on refresh, so touched never contains them.
  std::optional<uint32_t> best_tid() {
    auto t0 = std::chrono::steady_clock::now();
    std::optional<uint32_t> best;
    double bs = 0.0;
    // log(2 + n1*n2) >= log 3 > 1.09, so acc/1.09 overshoots the real
    // quotient by at least 0.7%, far beyond rounding error: anything whose
    // overshoot is still below the running best can neither win nor tie.
    const bool bounded = cfg.score.scheme == Scheme::score2;
    for (uint32_t t : touched) {
      const PairCell& c = cells[t];
      if (c.reject) continue;
      if (bounded && c.acc * (1.0 / 1.09) < bs) continue;
      double sc = score_of(t);
      if (!best || sc > bs || (sc == bs && tie_before(t, *best))) {
        best = t;
        bs = sc;
      }
    }
    tm_argmax += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return best;
  }

  // Shape comparison of the two signature type patterns plus consistency with
  // the accepted constructor pairs.  On success fills `derived` with the new
  // constructor pairs in first-occurrence order.
  bool type_valid(Symbol a, Symbol b,
                  std::vector<std::pair<Symbol, Symbol>>* derived) {
    TypePattern tp1 =
        type_pattern(state.lib1.signature(a), state.lib1.defined_types);
    TypePattern tp2 =
        type_pattern(state.lib2.signature(b), state.lib2.defined_types);
    auto leafpairs = match_type_patterns(tp1, tp2);
    if (!leafpairs) return false;
    std::unordered_map<Symbol, Symbol> loc1, loc2;
    derived->clear();
    for (const auto& [u, v] : *leafpairs) {
      auto a1 = t1map.find(u);
      auto a2 = t2map.find(v);
      if (a1 != t1map.end() || a2 != t2map.end()) {
        if (a1 == t1map.end() || a2 == t2map.end() || a1->second != a2->second)
          return false;
        continue;  // already unified consistently
      }
      auto l1 = loc1.find(u);
      auto l2 = loc2.find(v);
      if (l1 != loc1.end() || l2 != loc2.end()) {
        if (l1 == loc1.end() || l2 == loc2.end() || l1->second != v)
          return false;
        continue;  // duplicate leaf pair
      }
      loc1.emplace(u, v);
      loc2.emplace(v, u);
      derived->push_back({u, v});
    }
    return true;
  }

  void record_discard(Symbol a, Symbol b) {
    if (discarded.insert(pair_key(a, b)).second)
      state.discarded_by_type = discarded.size();
  }

  void drop_signature(Library& lib, Symbol c) {
    lib.constants.erase(c);
    auto it = std::find(lib.const_order.begin(), lib.const_order.end(), c);
    if (it != lib.const_order.end()) lib.const_order.erase(it);
  }

  void accept_type_pair(Symbol u, Symbol v) {
    Symbol ft = intern(fresh_type_name(state.type_pairs.size()));
    for (auto& [c, ty] : state.lib1.constants) ty = subst_tycon(ty, u, ft);
    for (auto& [c, ty] : state.lib2.constants) ty = subst_tycon(ty, v, ft);
    state.lib1.defined_types.insert(ft);
    state.lib2.defined_types.insert(ft);
    state.lib1.type_order.push_back(ft);
    state.lib2.type_order.push_back(ft);
    t1map.emplace(u, ft);
    t2map.emplace(v, ft);
    state.type_pairs.push_back({u, v, ft});
  }

  // Substitutes the accepted pair out of both libraries and records it.
  // Index and candidate maintenance is the caller's business.
  void accept_base(const ScoredPair& sp,
                   const std::vector<std::pair<Symbol, Symbol>>& derived,
                   const std::vector<size_t>& occ1,
                   const std::vector<size_t>& occ2) {
    Symbol d = intern(fresh_const_name(state.const_pairs.size()));
    for (size_t i : occ1)
      state.lib1.theorems[i].statement =
          subst_const(state.lib1.theorems[i].statement, sp.c1, d);
    for (size_t i : occ2)
      state.lib2.theorems[i].statement =
          subst_const(state.lib2.theorems[i].statement, sp.c2, d);
    TypePtr sig1 = state.lib1.signature(sp.c1);
    TypePtr sig2 = state.lib2.signature(sp.c2);
    state.lib1.constants.emplace(d, std::move(sig1));
    state.lib2.constants.emplace(d, std::move(sig2));
    state.lib1.const_order.push_back(d);
    state.lib2.const_order.push_back(d);
    drop_signature(state.lib1, sp.c1);
    drop_signature(state.lib2, sp.c2);
    state.lib1.defined_constants.insert(d);
    state.lib2.defined_constants.insert(d);
    if (vec_contains(norm1.ac_constants, sp.c1) &&
        vec_contains(norm2.ac_constants, sp.c2)) {
      norm1.ac_constants.push_back(d);
      norm2.ac_constants.push_back(d);
      state.lib1.ac_constants.push_back(d);
      state.lib2.ac_constants.push_back(d);
    }
    for (const auto& [u, v] : derived) accept_type_pair(u, v);
    state.const_pairs.push_back({sp.c1, sp.c2, d, sp.score, sp.shared_count});
    matched1.insert(sp.c1);
    matched2.insert(sp.c2);
  }

  void clear_rejects() {
    for (uint32_t t : reject_list) cells[t].reject = 0;
    reject_list.clear();
  }

  void accept_incremental(const ScoredPair& sp,
                          const std::vector<std::pair<Symbol, Symbol>>& derived) {
    auto ta = std::chrono::steady_clock::now();
    std::vector<size_t> occ1 = di1.occurrences(sp.c1);
    std::vector<size_t> occ2 = di2.occurrences(sp.c2);
    accept_base(sp, derived, occ1, occ2);
    tm_accept += std::chrono::duration<double>(std::chrono::steady_clock::now() - ta).count();
    Symbol d = state.const_pairs.back().fresh;
    di1.move_occurrences(sp.c1, d);
    di2.move_occurrences(sp.c2, d);
    // Membership changes delimit exactly the rel ids whose pair lists can
    // differ; everything else is rescored from unchanged lists next pass.
    auto t0 = std::chrono::steady_clock::now();
    std::vector<uint32_t> changed = di1.refresh(occ1, &stats);
    std::vector<uint32_t> more = di2.refresh(occ2, &stats);
    tm_refresh += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    auto t1 = std::chrono::steady_clock::now();
    changed.insert(changed.end(), more.begin(), more.end());
    std::sort(changed.begin(), changed.end());
    changed.erase(std::unique(changed.begin(), changed.end()), changed.end());
    size_t need = std::max(di1.nrids(), di2.nrids());
    if (rid_tids.size() < need) rid_tids.resize(need);
    for (uint32_t r : changed) rebuild_rid(r);
    tm_rebuild += std::chrono::duration<double>(std::chrono::steady_clock::now() - t1).count();
  }

  bool step() {
    if (cfg.full_rebuild) {
      di1.build(nullptr);
      di2.build(nullptr);
      reset_pairspace();
    }
    accumulate();
    clear_rejects();
    // On a type rejection the pair is marked and the argmax repeats without
    // it, mirroring a walk down the ranking.  Marks last one step only:
    // acceptances rewrite signatures, so later steps must reconsider.
    for (;;) {
      std::optional<uint32_t> bt = best_tid();
      if (!bt) return false;
      ScoredPair sp = make_scored(*bt);
      if (sp.score <= 0) return false;
      std::vector<std::pair<Symbol, Symbol>> derived;
      if (cfg.typecheck && !type_valid(sp.c1, sp.c2, &derived)) {
        record_discard(sp.c1, sp.c2);
        cells[*bt].reject = 1;
        reject_list.push_back(*bt);
        continue;
      }
      if (cfg.full_rebuild) {
        accept_base(sp, derived, di1.occurrences(sp.c1),
                    di2.occurrences(sp.c2));
        di1.move_occurrences(sp.c1, state.const_pairs.back().fresh);
        di2.move_occurrences(sp.c2, state.const_pairs.back().fresh);
      } else {
        accept_incremental(sp, derived);
      }
      ++iters_done;
      return true;
    }
  }

  std::vector<ScoredPair> scored_pairs() {
    accumulate();
    std::vector<ScoredPair> out;
    out.reserve(touched.size());
    for (uint32_t t : touched) out.push_back(make_scored(t));
    return out;
  }

  void single_walk() {
    std::vector<ScoredPair> ranking = scored_pairs();
    std::sort(ranking.begin(), ranking.end(), ranked_before);
    for (const ScoredPair& sp : ranking) {
      if (matched1.count(sp.c1) || matched2.count(sp.c2)) continue;
      std::vector<std::pair<Symbol, Symbol>> derived;
      if (cfg.typecheck && !type_valid(sp.c1, sp.c2, &derived)) {
        record_discard(sp.c1, sp.c2);
        continue;
      }
      accept_base(sp, derived, di1.occurrences(sp.c1),
                  di2.occurrences(sp.c2));
      di1.move_occurrences(sp.c1, state.const_pairs.back().fresh);
      di2.move_occurrences(sp.c2, state.const_pairs.back().fresh);
    }
    iters_done = 1;
    index_stale = true;
  }

  void run() {
    if (cfg.mode == MatchConfig::Mode::single_pass) {
      single_walk();
      return;
    }
    for (uint32_t i = 0; i < cfg.iterations; ++i)
      if (!step()) break;
    if (std::getenv("HOLMATCH_PROF"))
      std::fprintf(stderr, "prof: refresh=%.3f scatter=%.3f argmax=%.3f rebuild=%.3f accept=%.3f norm=%.3f pat=%.3f\n",
                   tm_refresh, tm_scatter, tm_argmax, tm_rebuild, tm_accept,
                   g_tm_norm, g_tm_pat);
  }

  PatternIndex fresh_snapshot(int side) {
    if (index_stale) {
      di1.build(nullptr);
      di2.build(nullptr);
      reset_pairspace();
      index_stale = false;
    }
    return (side == 1 ? di1 : di2).snapshot();
  }
};

MatchSession::MatchSession(Library lib1, Library lib2, MatchConfig cfg)
    : impl_(std::make_unique<Impl>(std::move(lib1), std::move(lib2),
                                   std::move(cfg))) {}
MatchSession::~MatchSession() = default;
MatchSession::MatchSession(MatchSession&&) noexcept = default;

bool MatchSession::step() { return impl_->step(); }
void MatchSession::run() { impl_->run(); }
const MatchState& MatchSession::state() const { return impl_->state; }
size_t MatchSession::iterations_done() const { return impl_->iters_done; }
PatternIndex MatchSession::snapshot1() const { return impl_->fresh_snapshot(1); }
PatternIndex MatchSession::snapshot2() const { return impl_->fresh_snapshot(2); }
const PatternInterner& MatchSession::interner() const { return impl_->interner; }
NormStats& MatchSession::norm_stats() { return impl_->stats; }

std::vector<ScoredPair> MatchSession::current_ranking() const {
  std::vector<ScoredPair> out = impl_->scored_pairs();
  out.erase(std::remove_if(out.begin(), out.end(),
                           [this](const ScoredPair& sp) {
                             return impl_->matched1.count(sp.c1) ||
                                    impl_->matched2.count(sp.c2);
                           }),
            out.end());
  std::sort(out.begin(), out.end(), ranked_before);
  return out;
}

MatchState run_match(Library lib1, Library lib2, const MatchConfig& cfg) {
  MatchSession session(std::move(lib1), std::move(lib2), cfg);
  session.run();
  return session.state();
}

TruthMetrics evaluate_against_truth(
    const MatchState& state, const std::unordered_map<Symbol, Symbol>& truth) {
  TruthMetrics m;
  m.total_checked = state.const_pairs.size();
  for (size_t i = 0; i < state.const_pairs.size(); ++i) {
    const AcceptedPair& p = state.const_pairs[i];
    auto it = truth.find(p.c1);
    bool ok = it != truth.end() && it->second == p.c2;
    if (ok) {
      ++m.total_correct;
      if (m.first_error_rank == TruthMetrics::kNoError)
        ++m.correct_before_first_error;
    } else if (m.first_error_rank == TruthMetrics::kNoError) {
      m.first_error_rank = i + 1;
    }
  }
  return m;
}

}  // namespace holmatch
