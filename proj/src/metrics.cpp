#include "netstress/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace netstress {

MetricKind metric_kind_from_name(const std::string& name) {
    if (name == "HELLINGER") return MetricKind::Hellinger;
    if (name == "BHATTACHARYYA_DISTANCE") return MetricKind::BhattacharyyaDistance;
    if (name == "KL_DIVERGENCE") return MetricKind::KlDivergence;
    throw MetricError("unknown metric '" + name +
                      "' (expected HELLINGER, BHATTACHARYYA_DISTANCE or KL_DIVERGENCE)");
}

std::string metric_kind_name(MetricKind kind) {
    switch (kind) {
        case MetricKind::Hellinger: return "HELLINGER";
        case MetricKind::BhattacharyyaDistance: return "BHATTACHARYYA_DISTANCE";
        case MetricKind::KlDivergence: return "KL_DIVERGENCE";
    }
    throw MetricError("invalid metric kind");
}

AlignedMasses align(const DegreeDistribution& p, const DegreeDistribution& q) {
    if (p.entries.empty() || q.entries.empty())
        throw MetricError("cannot align an empty distribution");
    AlignedMasses out;
    auto ip = p.entries.begin();
    auto iq = q.entries.begin();
    while (ip != p.entries.end() || iq != q.entries.end()) {
        std::size_t k;
        double pm = 0.0, qm = 0.0;
        if (iq == q.entries.end() || (ip != p.entries.end() && ip->first < iq->first)) {
            k = ip->first;
            pm = ip->second;
            ++ip;
        } else if (ip == p.entries.end() || iq->first < ip->first) {
            k = iq->first;
            qm = iq->second;
            ++iq;
        } else {
            k = ip->first;
            pm = ip->second;
            qm = iq->second;
            ++ip;
            ++iq;
        }
        out.support.push_back(k);
        out.p.push_back(pm);
        out.q.push_back(qm);
    }
    return out;
}

double bhattacharyya_coefficient(const DegreeDistribution& p, const DegreeDistribution& q) {
    const AlignedMasses a = align(p, q);
    double bc = 0.0;
    for (std::size_t i = 0; i < a.support.size(); ++i)
        bc += std::sqrt(a.p[i] * a.q[i]);
    return std::clamp(bc, 0.0, 1.0); // rounding can nudge past 1
}

double hellinger(const DegreeDistribution& p, const DegreeDistribution& q) {
    return std::sqrt(1.0 - bhattacharyya_coefficient(p, q));
}

double kl_divergence(const DegreeDistribution& p, const DegreeDistribution& q, double smoothing) {
    if (smoothing < 0.0) throw MetricError("smoothing must be >= 0");
    const AlignedMasses a = align(p, q);
    const std::size_t m = a.support.size();
    if (smoothing == 0.0) {
        for (std::size_t i = 0; i < m; ++i)
            if (a.p[i] > 0.0 && a.q[i] == 0.0)
                throw MetricError("KL divergence is infinite: q has zero mass at degree " +
                                  std::to_string(a.support[i]) +
                                  " where p > 0; use positive smoothing");
    }
    const double pnorm = 1.0 + smoothing * static_cast<double>(m);
    double kl = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double ps = (a.p[i] + smoothing) / pnorm;
        const double qs = (a.q[i] + smoothing) / pnorm;
        if (ps > 0.0) kl += ps * std::log(ps / qs);
    }
    return kl;
}

double distance(const DegreeDistribution& p, const DegreeDistribution& q, const MetricChoice& m) {
    switch (m.kind) {
        case MetricKind::Hellinger: return hellinger(p, q);
        case MetricKind::BhattacharyyaDistance: return 1.0 - bhattacharyya_coefficient(p, q);
        case MetricKind::KlDivergence: return kl_divergence(p, q, m.smoothing);
    }
    throw MetricError("invalid metric kind");
}

} // namespace netstress
