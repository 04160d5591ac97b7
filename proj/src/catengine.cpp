#include "cantor/catengine.hpp"

#include <algorithm>

#include "cantor/errors.hpp"

namespace cantor {

namespace {

/// Forwards to an oracle and appends every call to a transcript.
class LoggingOracle final : public ExtensionOracle {
 public:
  LoggingOracle(const ExtensionOracle& inner, std::vector<OracleQuery>& log) : inner_(inner), log_(log) {}
  std::pair<BitWord, BitWord> extend(std::size_t n, const BitWord& sigma, const BitWord& rho) const override {
    auto out = inner_.extend(n, sigma, rho);
    log_.push_back({n, sigma, rho, out.first, out.second});
    return out;
  }
  std::size_t levels() const override { return inner_.levels(); }

 private:
  const ExtensionOracle& inner_;
  std::vector<OracleQuery>& log_;
};

void require_levels(const ExtensionOracle& oracle, unsigned stages) {
  if (oracle.levels() <= stages) {
    throw Error(ErrorKind::PreconditionFailed, "instance has " + std::to_string(oracle.levels()) +
                                                   " levels, need " + std::to_string(stages + 1));
  }
}

[[noreturn]] void rethrow_with_stage(const Error& e, unsigned n) {
  throw Error(e.kind(), "stage " + std::to_string(n) + ": " + e.detail());
}

/// τ_0 i_0 τ_1 i_1 ... τ_{n-1} i_{n-1}, with τ_k complemented where j_k = 1.
BitWord branch_prefix(const std::vector<BitWord>& taus, const BitWord& i, const BitWord* j) {
  BitWord out;
  for (std::size_t k = 0; k < i.size(); ++k) {
    out = out.concat(j != nullptr && (*j)[k] ? taus[k].complemented() : taus[k]);
    out.push_back(i[k]);
  }
  return out;
}

/// (j_0, i_0, ..., j_{n-1}, i_{n-1}, j_n).
BitWord interleave(const BitWord& i, const BitWord& j) {
  BitWord out;
  for (std::size_t k = 0; k < i.size(); ++k) {
    out.push_back(j[k]);
    out.push_back(i[k]);
  }
  out.push_back(j[i.size()]);
  return out;
}

Certificate make_certificate(Variant variant, const ExtensionOracle& oracle, unsigned stages,
                             const std::vector<CategoryStageRecord>& records, const TreeSkeleton& skeleton) {
  Certificate c;
  c.variant = variant;
  c.input_digest = oracle.instance_digest();
  c.stages = stages;
  c.category = records;
  c.skeleton = skeleton;
  fill_summary(c);
  return c;
}

}  // namespace

CategoryRun silver_category_inscribe(const ExtensionOracle& oracle, unsigned stages) {
  require_levels(oracle, stages);
  CategoryRun run;
  std::vector<BitWord> taus;
  for (unsigned n = 0; n <= stages; ++n) {
    CategoryStageRecord rec;
    rec.n = n;
    rec.base = canonical_cylinder(n);
    LoggingOracle log(oracle, rec.queries);
    BitWord alpha;
    BitWord v = rec.base;
    try {
      for (const auto& i : all_words(n)) {
        const BitWord prefix = branch_prefix(taus, i, nullptr);
        auto [s, r] = log.extend(n, prefix.concat(alpha), v);
        alpha = s.suffix_from(prefix.size());
        v = r;
      }
    } catch (const Error& e) {
      rethrow_with_stage(e, n);
    }
    taus.push_back(alpha);
    rec.tau = alpha;
    rec.v = v;
    run.stages.push_back(std::move(rec));
  }
  run.skeleton.levels = stages;
  for (unsigned n = 0; n <= stages; ++n) {
    const std::vector<BitWord> head(taus.begin(), taus.begin() + n);
    for (const auto& i : all_words(n)) run.skeleton.stems[i] = branch_prefix(head, i, nullptr).concat(taus[n]);
  }
  run.certificate = make_certificate(Variant::SilverCat, oracle, stages, run.stages, run.skeleton);
  return run;
}

CategoryRun spinas_category_inscribe(const ExtensionOracle& oracle, unsigned stages) {
  require_levels(oracle, stages);
  CategoryRun run;
  std::vector<BitWord> taus;
  for (unsigned n = 0; n <= stages; ++n) {
    CategoryStageRecord rec;
    rec.n = n;
    rec.base = canonical_cylinder(n);
    LoggingOracle log(oracle, rec.queries);
    BitWord alpha;
    BitWord v = rec.base;
    try {
      const auto words = all_words(n);
      for (const auto& i : words) {
        for (const auto& j : words) {
          const BitWord prefix = branch_prefix(taus, i, &j);
          const auto from = static_cast<unsigned>(prefix.size());
          auto [s, r] = flip_symmetrized_extend(log, n, prefix.concat(alpha), v, from);
          alpha = s.suffix_from(from);
          v = r;
        }
      }
    } catch (const Error& e) {
      rethrow_with_stage(e, n);
    }
    taus.push_back(alpha);
    rec.tau = alpha;
    rec.v = v;
    run.stages.push_back(std::move(rec));
  }
  run.skeleton.levels = stages;
  std::map<BitWord, BranchLabel> labels;
  for (unsigned n = 0; n <= stages; ++n) {
    const std::vector<BitWord> head(taus.begin(), taus.begin() + n);
    for (const auto& i : all_words(n)) {
      for (const auto& j : all_words(n + 1)) {
        const BitWord last = j[n] ? taus[n].complemented() : taus[n];
        const BitWord addr = interleave(i, j);
        run.skeleton.stems[addr] = branch_prefix(head, i, &j).concat(last);
        labels[addr] = BranchLabel{i, j};
      }
    }
  }
  run.skeleton.labels = std::move(labels);
  run.certificate = make_certificate(Variant::SpinasCat, oracle, stages, run.stages, run.skeleton);
  return run;
}

std::map<BitWord, BitWord> pairwise_shrink(const ExtensionOracle& oracle, const std::map<BitWord, BitWord>& family,
                                           std::size_t level, std::vector<OracleQuery>* log) {
  std::map<BitWord, BitWord> out = family;
  for (auto a = out.begin(); a != out.end(); ++a) {
    for (auto b = out.begin(); b != out.end(); ++b) {
      if (a == b) continue;
      auto [s, r] = oracle.extend(level, a->second, b->second);
      if (log != nullptr) log->push_back({level, a->second, b->second, s, r});
      a->second = s;
      b->second = r;
    }
  }
  std::size_t len = 0;
  for (const auto& [tau, w] : out) len = std::max(len, w.size());
  for (auto& [tau, w] : out) w = w.resized(len);
  return out;
}

CategoryRun uniform_mycielski_category_inscribe(const ExtensionOracle& oracle, unsigned stages) {
  require_levels(oracle, stages);
  CategoryRun run;
  std::map<BitWord, BitWord> sigma;
  for (unsigned n = 0; n <= stages; ++n) {
    CategoryStageRecord rec;
    rec.n = n;
    rec.base = canonical_cylinder(n);
    LoggingOracle log(oracle, rec.queries);
    try {
      if (n == 0) {
        auto [s, r] = log.extend(0, BitWord(), rec.base);
        sigma = {{BitWord(), s}};
        rec.v = r;
      } else {
        BitWord w = rec.base;
        std::map<BitWord, BitWord> pre;
        for (const auto& [tau, stem] : sigma) {
          for (bool i : {false, true}) {
            auto [s, r] = log.extend(n, stem.appended(i), w);
            pre[tau.appended(i)] = s;
            w = r;
            rec.chain.push_back(w);
          }
        }
        rec.v = w;
        rec.sigma_pre = pre;
        sigma = pairwise_shrink(oracle, pre, n, &rec.queries);
      }
    } catch (const Error& e) {
      rethrow_with_stage(e, n);
    }
    rec.sigma = sigma;
    for (const auto& [tau, stem] : sigma) run.skeleton.stems[tau] = stem;
    run.stages.push_back(std::move(rec));
  }
  run.skeleton.levels = stages;
  run.certificate = make_certificate(Variant::UniformCat, oracle, stages, run.stages, run.skeleton);
  return run;
}

}  // namespace cantor
