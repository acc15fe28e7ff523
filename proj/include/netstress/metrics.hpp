#pragma once

#include <string>
#include <vector>

#include "netstress/graph.hpp"

namespace netstress {

enum class MetricKind {
    Hellinger,             // default; the only true metric of the three
    BhattacharyyaDistance, // 1 - BC; premetric, bounded, 0 at identity
    KlDivergence,          // not symmetric
};

struct MetricChoice {
    MetricKind kind = MetricKind::Hellinger;
    double smoothing = 1e-9; // used only by KL
};

MetricKind metric_kind_from_name(const std::string& name);
std::string metric_kind_name(MetricKind kind);

/// Two distributions re-expressed over the sorted union of their supports;
/// degrees absent from one side get mass 0.
struct AlignedMasses {
    std::vector<std::size_t> support;
    std::vector<double> p;
    std::vector<double> q;
};

AlignedMasses align(const DegreeDistribution& p, const DegreeDistribution& q);

/// BC = sum_k sqrt(p_k q_k), in [0, 1]. 1 iff p = q, 0 iff supports disjoint.
double bhattacharyya_coefficient(const DegreeDistribution& p, const DegreeDistribution& q);

/// sqrt(1 - BC). Satisfies the metric axioms, including triangle inequality.
double hellinger(const DegreeDistribution& p, const DegreeDistribution& q);

/// KL(p || q) with additive smoothing over the union support followed by
/// renormalization, natural log. smoothing = 0 requires q > 0 wherever
/// p > 0; otherwise throws rather than returning infinity.
double kl_divergence(const DegreeDistribution& p, const DegreeDistribution& q, double smoothing);

/// Dispatch on the chosen metric; result is only ever compared against the
/// binning tolerance.
double distance(const DegreeDistribution& p, const DegreeDistribution& q, const MetricChoice& m);

} // namespace netstress
