#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cwibtd/matrix.hpp"

namespace cwibtd {

using Label = std::uint32_t;

/// Class x cluster co-occurrence counts. Labels are compacted to dense ids
/// in ascending order of their original values.
struct ContingencyTable {
  DenseMatrix<std::size_t> counts;      // classes x clusters
  std::vector<std::size_t> class_totals;
  std::vector<std::size_t> cluster_totals;
  std::size_t total = 0;

  /// Throws LengthMismatch or EmptyInput.
  static ContingencyTable build(std::span<const Label> pred,
                                std::span<const Label> truth);
};

/// (1/N) Σ_clusters max_class |cluster ∩ class|.
double purity(std::span<const Label> pred, std::span<const Label> truth);
double purity(const ContingencyTable& table);

/// Σ d_hl ln(D d_hl / (d_h c_l)) / sqrt((Σ d_h ln(d_h/D)) (Σ c_l ln(c_l/D))),
/// with 0 ln 0 = 0. A partition with a single block has zero entropy and
/// yields 0. Any log base gives the same value.
double nmi(std::span<const Label> pred, std::span<const Label> truth);
double nmi(const ContingencyTable& table);

struct RunMetrics {
  double purity = 0.0;
  double nmi = 0.0;
  std::size_t docs = 0;
};

RunMetrics evaluate(std::span<const Label> pred, std::span<const Label> truth);

struct ScopedMetrics {
  RunMetrics all;
  /// Restricted to documents whose true class is rare. Empty when no rare
  /// classes were designated.
  std::optional<RunMetrics> rare;
};

/// Throws UnknownClass if a rare class never occurs in `truth`.
ScopedMetrics scoped_metrics(std::span<const Label> pred,
                             std::span<const Label> truth,
                             std::span<const Label> rare_classes);

enum class Scope { all, rare };
const char* to_string(Scope scope) noexcept;

/// Per-run values of one (model, scope) cell and their arithmetic mean.
struct MetricReport {
  Scope scope = Scope::all;
  bool empty_scope = false;
  std::vector<double> purity_runs;
  std::vector<double> nmi_runs;
  double purity_mean = 0.0;
  double nmi_mean = 0.0;

  std::size_t runs() const noexcept { return purity_runs.size(); }
};

/// Mean over runs. A scope that is empty in every run is marked empty.
MetricReport aggregate(Scope scope, const std::vector<ScopedMetrics>& runs);

}  // namespace cwibtd
