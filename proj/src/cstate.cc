#include "arbor/cstate.h"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace arbor {

std::string_view to_string(CState c) {
    switch (c) {
        case CState::Two:
            return "2";
        case CState::One:
            return "1";
        case CState::Sigma:
            return "sigma";
        case CState::Mixed:
            return "M";
    }
    return "?";
}

CState cstate_from_string(std::string_view s) {
    for (CState c : kAllCStates) {
        if (to_string(c) == s) {
            return c;
        }
    }
    throw std::invalid_argument("unknown c-state '" + std::string(s) + "'");
}

CStateDist::CStateDist(double p2, double p1, double psigma, double pm) : p_{p2, p1, psigma, pm} {
    double sum = 0.0;
    for (double v : p_) {
        if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
            throw std::domain_error("c-state probability out of [0,1]: " + to_string());
        }
        sum += v;
    }
    if (std::abs(sum - 1.0) > kSumTolerance) {
        throw std::domain_error("c-state distribution does not sum to 1: " + to_string());
    }
}

CStateDist CStateDist::point(CState c) {
    std::array<double, kNumCStates> p{};
    p[index_of(c)] = 1.0;
    return CStateDist(Unchecked{}, p);
}

CStateDist CStateDist::normalized(const std::array<double, kNumCStates>& raw) {
    // Hot path of every recursion: one pass, failures reported out of line.
    std::array<double, kNumCStates> p;
    double sum = 0.0;
    bool ok = true;
    for (std::size_t i = 0; i < kNumCStates; ++i) {
        ok = ok && raw[i] >= kRoundoffFloor;  // also rejects NaN
        p[i] = raw[i] > 0.0 ? raw[i] : 0.0;
        sum += p[i];
    }
    if (!ok || !(sum > 0.0) || !std::isfinite(sum)) {
        for (double v : raw) {
            if (!(v >= kRoundoffFloor) || !std::isfinite(v)) {
                std::ostringstream msg;
                msg << "probability update left the simplex (component " << v << ")";
                throw ComputationError(msg.str());
            }
        }
        throw ComputationError("probability update has zero total mass");
    }
    for (double& v : p) {
        v /= sum;
    }
    return CStateDist(Unchecked{}, p);
}

double CStateDist::max_abs_diff(const CStateDist& other) const {
    double m = 0.0;
    for (std::size_t i = 0; i < kNumCStates; ++i) {
        m = std::max(m, std::abs(p_[i] - other.p_[i]));
    }
    return m;
}

std::string CStateDist::to_string() const {
    std::ostringstream out;
    out.precision(17);
    out << "(" << p_[0] << ", " << p_[1] << ", " << p_[2] << ", " << p_[3] << ")";
    return out.str();
}

}  // namespace arbor
