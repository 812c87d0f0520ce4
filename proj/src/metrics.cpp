#include "cwibtd/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "cwibtd/error.hpp"

namespace cwibtd {

namespace {

std::vector<std::size_t> compact(std::span<const Label> labels,
                                 std::size_t& distinct) {
  std::vector<Label> values(labels.begin(), labels.end());
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  distinct = values.size();
  std::vector<std::size_t> ids(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    ids[i] = static_cast<std::size_t>(
        std::lower_bound(values.begin(), values.end(), labels[i]) -
        values.begin());
  }
  return ids;
}

}  // namespace

ContingencyTable ContingencyTable::build(std::span<const Label> pred,
                                         std::span<const Label> truth) {
  if (pred.size() != truth.size()) {
    throw LengthMismatch("got " + std::to_string(pred.size()) +
                         " predictions for " + std::to_string(truth.size()) +
                         " labels");
  }
  if (pred.empty()) throw EmptyInput("no labels to evaluate");
  std::size_t n_clusters = 0;
  std::size_t n_classes = 0;
  auto cluster = compact(pred, n_clusters);
  auto cls = compact(truth, n_classes);

  ContingencyTable t;
  t.counts = DenseMatrix<std::size_t>(n_classes, n_clusters, 0);
  t.class_totals.assign(n_classes, 0);
  t.cluster_totals.assign(n_clusters, 0);
  for (std::size_t i = 0; i < pred.size(); ++i) {
    ++t.counts(cls[i], cluster[i]);
    ++t.class_totals[cls[i]];
    ++t.cluster_totals[cluster[i]];
  }
  t.total = pred.size();
  return t;
}

double purity(const ContingencyTable& t) {
  std::size_t hits = 0;
  for (std::size_t l = 0; l < t.counts.cols(); ++l) {
    std::size_t best = 0;
    for (std::size_t h = 0; h < t.counts.rows(); ++h) {
      best = std::max(best, t.counts(h, l));
    }
    hits += best;
  }
  return static_cast<double>(hits) / static_cast<double>(t.total);
}

double purity(std::span<const Label> pred, std::span<const Label> truth) {
  return purity(ContingencyTable::build(pred, truth));
}

double nmi(const ContingencyTable& t) {
  const double D = static_cast<double>(t.total);
  const std::size_t H = t.counts.rows();
  const std::size_t L = t.counts.cols();

  // Identical partitions up to renaming: every row and column of the table
  // has exactly one non-zero cell.
  if (H == L && H > 1) {
    bool bijective = true;
    for (std::size_t h = 0; h < H && bijective; ++h) {
      for (std::size_t l = 0; l < L; ++l) {
        const auto c = t.counts(h, l);
        if (c != 0 && (c != t.class_totals[h] || c != t.cluster_totals[l])) {
          bijective = false;
          break;
        }
      }
    }
    if (bijective) return 1.0;
  }

  double class_term = 0.0;
  for (auto dh : t.class_totals) {
    if (dh > 0) class_term += static_cast<double>(dh) * std::log(dh / D);
  }
  double cluster_term = 0.0;
  for (auto cl : t.cluster_totals) {
    if (cl > 0) cluster_term += static_cast<double>(cl) * std::log(cl / D);
  }
  if (class_term == 0.0 || cluster_term == 0.0) return 0.0;

  double mutual = 0.0;
  for (std::size_t h = 0; h < H; ++h) {
    for (std::size_t l = 0; l < L; ++l) {
      const auto dhl = t.counts(h, l);
      if (dhl == 0) continue;
      const double ratio = D * static_cast<double>(dhl) /
                           (static_cast<double>(t.class_totals[h]) *
                            static_cast<double>(t.cluster_totals[l]));
      mutual += static_cast<double>(dhl) * std::log(ratio);
    }
  }
  const double value = mutual / std::sqrt(class_term * cluster_term);
  return std::clamp(value, 0.0, 1.0);
}

double nmi(std::span<const Label> pred, std::span<const Label> truth) {
  return nmi(ContingencyTable::build(pred, truth));
}

RunMetrics evaluate(std::span<const Label> pred, std::span<const Label> truth) {
  auto table = ContingencyTable::build(pred, truth);
  return {purity(table), nmi(table), table.total};
}

ScopedMetrics scoped_metrics(std::span<const Label> pred,
                             std::span<const Label> truth,
                             std::span<const Label> rare_classes) {
  ScopedMetrics out;
  out.all = evaluate(pred, truth);
  if (rare_classes.empty()) return out;

  for (Label c : rare_classes) {
    if (std::find(truth.begin(), truth.end(), c) == truth.end()) {
      throw UnknownClass("rare class " + std::to_string(c) +
                         " does not occur in the evaluated documents");
    }
  }
  std::vector<Label> rp;
  std::vector<Label> rt;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (std::find(rare_classes.begin(), rare_classes.end(), truth[i]) !=
        rare_classes.end()) {
      rp.push_back(pred[i]);
      rt.push_back(truth[i]);
    }
  }
  out.rare = evaluate(rp, rt);
  return out;
}

const char* to_string(Scope scope) noexcept {
  return scope == Scope::all ? "all" : "rare";
}

MetricReport aggregate(Scope scope, const std::vector<ScopedMetrics>& runs) {
  MetricReport r;
  r.scope = scope;
  for (const auto& run : runs) {
    const RunMetrics* m = scope == Scope::all ? &run.all
                          : run.rare          ? &*run.rare
                                              : nullptr;
    if (!m) continue;
    r.purity_runs.push_back(m->purity);
    r.nmi_runs.push_back(m->nmi);
  }
  r.empty_scope = r.purity_runs.empty();
  if (!r.empty_scope) {
    double ps = 0.0;
    double ns = 0.0;
    for (std::size_t i = 0; i < r.runs(); ++i) {
      ps += r.purity_runs[i];
      ns += r.nmi_runs[i];
    }
    r.purity_mean = ps / static_cast<double>(r.runs());
    r.nmi_mean = ns / static_cast<double>(r.runs());
  }
  return r;
}

}  // namespace cwibtd
