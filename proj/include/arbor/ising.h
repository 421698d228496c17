#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

namespace arbor {

inline constexpr double kInfiniteField = std::numeric_limits<double>::infinity();

/// Ferromagnetic Ising model on a tree with unit coupling.
struct IsingParams {
    double beta = 1.0;
    double h_bulk = 0.0;
    int n_br = 2;
    double h_boundary = kInfiniteField;  // +-infinity pins the leaves

    void validate() const;
};

/// h' = h_bulk + (n_br / beta) artanh(tanh(beta h_r) tanh(beta)).
/// Infinite h_r is handled exactly (the artanh term becomes +-n_br).
double ising_step(double h_r, const IsingParams& params);

struct RootField {
    double h_r = 0.0;
    std::size_t depth = 0;
    bool converged = true;  // always true for finite depth
    double residual = 0.0;
};

struct RootFieldOptions {
    double tol = 1e-12;
    std::size_t max_steps = 1'000'000;
};

/// Effective field at the root after `depth` steps from h_boundary, or at the
/// fixed point when depth is empty.
RootField root_field(const IsingParams& params, std::optional<std::size_t> depth = std::nullopt,
                     const RootFieldOptions& opts = {});

struct DeltaH {
    double value = 0.0;  // h_R(up) - h_R(down)
    double up = 0.0;
    double down = 0.0;
    bool converged = true;
};

DeltaH delta_h_root(const IsingParams& params, std::optional<std::size_t> depth = std::nullopt,
                    const RootFieldOptions& opts = {});

struct BoundaryFieldRow {
    double h_leaf = 0.0;
    double h_root = 0.0;
    double response = 0.0;  // h_R(+inf) - h_R(h_leaf)
    bool converged = true;
};

std::vector<BoundaryFieldRow> boundary_field_scan(double beta, double h_bulk,
                                                  const std::vector<double>& h_leaf,
                                                  int n_br = 2, const RootFieldOptions& opts = {});

struct IsingThreshold {
    double value = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    double below = 0.0;  // order parameter just below the bracket
    double above = 0.0;  // and just above
    std::size_t probes = 0;
    std::size_t unconverged_probes = 0;
};

/// Bisects tanh(beta) at h_bulk = 0 for the onset of a nonzero Delta h_R.
/// Uses the exact map on t = tanh(beta h), t' = tanh(n_br artanh(tanh(beta) t)),
/// which is cheap enough to ride out critical slowing down. Probes stop early
/// on a monotonicity certificate for the sign of the limit.
IsingThreshold find_critical_tanh_beta(int n_br = 2, double lo = 0.3, double hi = 0.8,
                                       double tol = 1e-6, double eps = 1e-9);

/// Bisects h_bulk at fixed beta for the first-order vanishing of Delta h_R.
IsingThreshold find_critical_field(double beta, int n_br = 2, double lo = 0.0, double hi = 1.0,
                                   double tol = 1e-5, double eps = 1e-6);

/// Bisects h_leaf at fixed (beta, h_bulk) for the jump in the boundary response.
IsingThreshold find_boundary_transition(double beta, double h_bulk, double lo, double hi,
                                        int n_br = 2, double tol = 1e-6, double eps = 1e-6);

}  // namespace arbor
