#include "arbor/dense_oracle.h"

#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <queue>
#include <sstream>
#include <stdexcept>

#include "arbor/rng.h"

namespace arbor {
namespace {

using cd = std::complex<double>;
using Mat = Eigen::MatrixXcd;

constexpr double kTol = 1e-9;

std::size_t get_bit(std::size_t x, std::size_t q) { return (x >> q) & 1U; }

std::size_t remove_bit(std::size_t x, std::size_t q) {
    const std::size_t low = x & ((std::size_t{1} << q) - 1);
    return low | ((x >> (q + 1)) << q);
}

std::size_t insert_bit(std::size_t x, std::size_t q, std::size_t b) {
    const std::size_t low = x & ((std::size_t{1} << q) - 1);
    return low | (b << q) | ((x >> q) << (q + 1));
}

// Pauli string (one char per qubit, qubit 0 first) as a dense matrix.
Mat pauli_matrix(std::string_view s) {
    const std::size_t n = s.size();
    const std::size_t dim = std::size_t{1} << n;
    Mat m = Mat::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::size_t in = 0; in < dim; ++in) {
        std::size_t out = in;
        cd amp = 1.0;
        for (std::size_t q = 0; q < n; ++q) {
            const std::size_t b = get_bit(in, q);
            switch (s[q]) {
                case 'I':
                    break;
                case 'X':
                    out ^= std::size_t{1} << q;
                    break;
                case 'Z':
                    amp *= b ? -1.0 : 1.0;
                    break;
                case 'Y':
                    out ^= std::size_t{1} << q;
                    amp *= b ? cd(0, -1) : cd(0, 1);
                    break;
                default:
                    throw std::invalid_argument("bad Pauli character");
            }
        }
        m(static_cast<Eigen::Index>(out), static_cast<Eigen::Index>(in)) = amp;
    }
    return m;
}

std::string two_qubit_string(PauliBits p) {
    static constexpr char names[4] = {'I', 'X', 'Z', 'Y'};
    return {names[p & 3], names[(p >> 2) & 3]};
}

Mat embed(const Mat& u2, std::size_t n, std::size_t q1, std::size_t q2) {
    const std::size_t dim = std::size_t{1} << n;
    const std::size_t mask = (std::size_t{1} << q1) | (std::size_t{1} << q2);
    Mat u = Mat::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::size_t o = 0; o < dim; ++o) {
        for (std::size_t i = 0; i < dim; ++i) {
            if ((o & ~mask) != (i & ~mask)) {
                continue;
            }
            const std::size_t lo = get_bit(o, q1) | get_bit(o, q2) << 1;
            const std::size_t li = get_bit(i, q1) | get_bit(i, q2) << 1;
            u(static_cast<Eigen::Index>(o), static_cast<Eigen::Index>(i)) =
                u2(static_cast<Eigen::Index>(lo), static_cast<Eigen::Index>(li));
        }
    }
    return u;
}

Mat single_h() {
    Mat h(2, 2);
    const double s = 1.0 / std::sqrt(2.0);
    h << s, s, s, -s;
    return h;
}

Mat single_s() {
    Mat m(2, 2);
    m << 1, 0, 0, cd(0, 1);
    return m;
}

Mat embed_single(const Mat& u1, std::size_t n, std::size_t q) {
    const std::size_t dim = std::size_t{1} << n;
    Mat u = Mat::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::size_t o = 0; o < dim; ++o) {
        for (std::size_t i = 0; i < dim; ++i) {
            if ((o ^ i) & ~(std::size_t{1} << q)) {
                continue;
            }
            u(static_cast<Eigen::Index>(o), static_cast<Eigen::Index>(i)) =
                u1(static_cast<Eigen::Index>(get_bit(o, q)), static_cast<Eigen::Index>(get_bit(i, q)));
        }
    }
    return u;
}

Mat cnot_matrix(std::size_t n, std::size_t c, std::size_t t) {
    const std::size_t dim = std::size_t{1} << n;
    Mat u = Mat::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < dim; ++i) {
        const std::size_t o = get_bit(i, c) ? i ^ (std::size_t{1} << t) : i;
        u(static_cast<Eigen::Index>(o), static_cast<Eigen::Index>(i)) = 1.0;
    }
    return u;
}

// Conjugation signature of a dense two-qubit unitary: images of X1, Z1, X2, Z2
// as (Pauli, sign). Found by matching against all 16 dense Paulis.
std::uint32_t signature(const Mat& u) {
    static const std::vector<Mat> paulis = [] {
        std::vector<Mat> out;
        for (PauliBits p = 0; p < 16; ++p) {
            out.push_back(pauli_matrix(two_qubit_string(p)));
        }
        return out;
    }();
    static constexpr PauliBits basis[4] = {kX1, kZ1, kX2, kZ2};
    std::uint32_t key = 0;
    for (int i = 0; i < 4; ++i) {
        const Mat img = u * paulis[basis[i]] * u.adjoint();
        bool found = false;
        for (PauliBits p = 1; p < 16 && !found; ++p) {
            for (int sign = 0; sign < 2; ++sign) {
                if ((img - (sign ? -1.0 : 1.0) * paulis[p]).norm() < kTol) {
                    key |= static_cast<std::uint32_t>(p) << (4 * i);
                    key |= static_cast<std::uint32_t>(sign) << (16 + i);
                    found = true;
                    break;
                }
            }
        }
        if (!found) {
            throw std::logic_error("dense unitary is not Clifford");
        }
    }
    return key;
}

std::uint32_t signature(const TwoQubitClifford& g) {
    std::uint32_t key = 0;
    for (int i = 0; i < 4; ++i) {
        key |= static_cast<std::uint32_t>(g.images()[i]) << (4 * i);
    }
    return key | static_cast<std::uint32_t>(g.signs()) << 16;
}

// All 11520 two-qubit Cliffords as dense unitaries, by closure over dense gates.
const std::map<std::uint32_t, Mat>& dense_group() {
    static const std::map<std::uint32_t, Mat> group = [] {
        std::vector<Mat> gens;
        const Mat h = single_h();
        const Mat s = single_s();
        gens.push_back(embed_single(h, 2, 0));
        gens.push_back(embed_single(s, 2, 0));
        gens.push_back(embed_single(h, 2, 1));
        gens.push_back(embed_single(s, 2, 1));
        gens.push_back(cnot_matrix(2, 0, 1));
        for (const char* p : {"XI", "ZI", "IX", "IZ"}) {
            gens.push_back(pauli_matrix(p));
        }
        std::map<std::uint32_t, Mat> out;
        std::queue<Mat> frontier;
        const Mat id = Mat::Identity(4, 4);
        out.emplace(signature(id), id);
        frontier.push(id);
        while (!frontier.empty()) {
            const Mat u = frontier.front();
            frontier.pop();
            for (const Mat& g : gens) {
                const Mat next = g * u;
                if (out.emplace(signature(next), next).second) {
                    frontier.push(next);
                }
            }
        }
        return out;
    }();
    return group;
}

}  // namespace

DenseState::DenseState(std::size_t n) : n_(n) {
    if (n > kMaxQubits) {
        throw std::invalid_argument("dense oracle supports at most 6 qubits");
    }
    const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n);
    rho_ = Mat::Identity(dim, dim) / static_cast<double>(dim);
}

DenseState DenseState::from_tableau_strings(std::size_t n, const std::vector<std::string>& generators) {
    DenseState d(n);
    const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n);
    Mat rho = Mat::Identity(dim, dim);
    for (const std::string& g : generators) {
        std::string_view body = g;
        double sign = 1.0;
        if (!body.empty() && (body[0] == '+' || body[0] == '-')) {
            sign = body[0] == '-' ? -1.0 : 1.0;
            body.remove_prefix(1);
        }
        if (body.size() != n) {
            throw std::invalid_argument("generator length does not match qubit count");
        }
        rho = rho * (Mat::Identity(dim, dim) + sign * pauli_matrix(body));
    }
    d.rho_ = rho / rho.trace();
    return d;
}

void DenseState::apply_unitary(const Mat& u) { rho_ = u * rho_ * u.adjoint(); }

void DenseState::apply_clifford(const TwoQubitClifford& g, std::size_t q1, std::size_t q2) {
    if (q1 == q2 || q1 >= n_ || q2 >= n_) {
        throw std::invalid_argument("bad qubit pair");
    }
    const auto& group = dense_group();
    const auto it = group.find(signature(g));
    if (it == group.end()) {
        throw std::logic_error("Clifford element missing from the dense group");
    }
    apply_unitary(embed(it->second, n_, q1, q2));
}

void DenseState::apply_h(std::size_t q) { apply_unitary(embed_single(single_h(), n_, q)); }

void DenseState::apply_s(std::size_t q) { apply_unitary(embed_single(single_s(), n_, q)); }

void DenseState::apply_cnot(std::size_t control, std::size_t target) {
    apply_unitary(cnot_matrix(n_, control, target));
}

double DenseState::z_probability(std::size_t q, int outcome) const {
    double p = 0.0;
    const std::size_t want = outcome == 1 ? 0 : 1;
    for (Eigen::Index i = 0; i < rho_.rows(); ++i) {
        if (get_bit(static_cast<std::size_t>(i), q) == want) {
            p += rho_(i, i).real();
        }
    }
    return p;
}

double DenseState::postselect_z(std::size_t q, int outcome) {
    const double p = z_probability(q, outcome);
    if (p < kTol) {
        return 0.0;
    }
    const std::size_t want = outcome == 1 ? 0 : 1;
    for (Eigen::Index i = 0; i < rho_.rows(); ++i) {
        for (Eigen::Index j = 0; j < rho_.cols(); ++j) {
            if (get_bit(static_cast<std::size_t>(i), q) != want ||
                get_bit(static_cast<std::size_t>(j), q) != want) {
                rho_(i, j) = 0.0;
            }
        }
    }
    rho_ /= p;
    return p;
}

void DenseState::trace_out(std::size_t q) {
    if (q >= n_ || n_ == 0) {
        throw std::invalid_argument("bad qubit");
    }
    const auto dim = static_cast<Eigen::Index>(std::size_t{1} << (n_ - 1));
    Mat out = Mat::Zero(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        for (Eigen::Index j = 0; j < dim; ++j) {
            for (std::size_t b = 0; b < 2; ++b) {
                out(i, j) += rho_(static_cast<Eigen::Index>(insert_bit(static_cast<std::size_t>(i), q, b)),
                                  static_cast<Eigen::Index>(insert_bit(static_cast<std::size_t>(j), q, b)));
            }
        }
    }
    rho_ = std::move(out);
    --n_;
}

void DenseState::reset_mixed(std::size_t q) {
    DenseState reduced = *this;
    reduced.trace_out(q);
    for (Eigen::Index i = 0; i < rho_.rows(); ++i) {
        for (Eigen::Index j = 0; j < rho_.cols(); ++j) {
            const auto ui = static_cast<std::size_t>(i);
            const auto uj = static_cast<std::size_t>(j);
            rho_(i, j) = get_bit(ui, q) != get_bit(uj, q)
                             ? cd(0.0)
                             : 0.5 * reduced.rho_(static_cast<Eigen::Index>(remove_bit(ui, q)),
                                                  static_cast<Eigen::Index>(remove_bit(uj, q)));
        }
    }
}

double DenseState::entropy(const std::vector<std::size_t>& subset) const {
    std::vector<bool> keep(n_, false);
    for (std::size_t q : subset) {
        keep.at(q) = true;
    }
    DenseState reduced = *this;
    for (std::size_t q = n_; q-- > 0;) {
        if (!keep[q]) {
            reduced.trace_out(q);
        }
    }
    if (reduced.n_ == 0) {
        return 0.0;
    }
    const Eigen::SelfAdjointEigenSolver<Mat> solver(reduced.rho_, Eigen::EigenvaluesOnly);
    double s = 0.0;
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
        const double l = solver.eigenvalues()(i);
        if (l > 1e-12) {
            s -= l * std::log2(l);
        }
    }
    return s;
}

double DenseState::trace() const { return rho_.trace().real(); }

DenseCheckReport check_tableau_against_dense(const DenseCheckOptions& opts) {
    if (opts.max_qubits < 1 || opts.max_qubits > 4) {
        throw std::invalid_argument("dense comparison runs on 1 to 4 qubits");
    }
    const std::vector<TwoQubitClifford> group = enumerate_clifford_group();
    DenseCheckReport report;
    auto fail = [&](std::size_t seq, const std::string& what) {
        if (report.failures.size() < 20) {
            report.failures.push_back("sequence " + std::to_string(seq) + ": " + what);
        }
    };

    for (std::size_t seq = 0; seq < opts.sequences; ++seq) {
        Rng rng = trial_stream(opts.seed, seq);
        auto uniform = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
        std::size_t n = 1 + uniform(opts.max_qubits);
        StabilizerTableau tab = StabilizerTableau::zero_state(n);
        DenseState dense = DenseState::from_tableau_strings(n, tab.generator_strings());

        auto compare_entropies = [&](const char* after) {
            for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
                std::vector<std::size_t> subset;
                for (std::size_t q = 0; q < n; ++q) {
                    if (mask & (std::size_t{1} << q)) {
                        subset.push_back(q);
                    }
                }
                ++report.entropy_checks;
                const int s_tab = tab.entropy(subset);
                const double s_dense = dense.entropy(subset);
                if (std::abs(s_dense - s_tab) > kTol) {
                    std::ostringstream msg;
                    msg << "entropy of subset mask " << mask << " after " << after << ": tableau " << s_tab
                        << ", dense " << s_dense;
                    fail(seq, msg.str());
                }
            }
            if (!tab.invariant_violations().empty()) {
                fail(seq, std::string("tableau invariants broken after ") + after);
            }
        };

        for (std::size_t op = 0; op < opts.ops_per_sequence; ++op) {
            const std::size_t kind = uniform(7);
            const std::size_t q = uniform(n);
            std::size_t q2 = n > 1 ? uniform(n - 1) : 0;
            if (q2 >= q) {
                ++q2;
            }
            const char* name = "";
            if (kind == 0 && n > 1) {
                const TwoQubitClifford& g = group[uniform(group.size())];
                tab.apply_clifford(g, q, q2);
                dense.apply_clifford(g, q, q2);
                name = "clifford";
            } else if (kind == 1) {
                tab.apply_h(q);
                dense.apply_h(q);
                name = "h";
            } else if (kind == 2) {
                tab.apply_s(q);
                dense.apply_s(q);
                name = "s";
            } else if (kind == 3 && n > 1) {
                tab.apply_cnot(q, q2);
                dense.apply_cnot(q, q2);
                name = "cnot";
            } else if (kind == 4 || kind == 0 || kind == 3) {
                for (int outcome : {1, -1}) {
                    ++report.probability_checks;
                    const double pt = tab.z_probability(q, outcome);
                    const double pd = dense.z_probability(q, outcome);
                    if (std::abs(pt - pd) > kTol) {
                        std::ostringstream msg;
                        msg << "P(Z_" << q << " = " << outcome << "): tableau " << pt << ", dense " << pd;
                        fail(seq, msg.str());
                    }
                }
                const int outcome = tab.measure_z(q, rng);
                if (dense.postselect_z(q, outcome) == 0.0) {
                    fail(seq, "tableau produced an outcome the dense state forbids");
                    break;
                }
                name = "measure";
            } else if (kind == 5) {
                tab.reset_mixed(q);
                dense.reset_mixed(q);
                name = "reset";
            } else if (n > 1) {
                tab.trace_out(q);
                dense.trace_out(q);
                --n;
                name = "trace_out";
            } else {
                continue;
            }
            compare_entropies(name);
        }

        // Measurement statistics on a fresh copy per shot.
        const std::size_t q = uniform(n);
        const double p_plus = dense.z_probability(q, 1);
        std::size_t plus = 0;
        for (std::size_t shot = 0; shot < opts.shots; ++shot) {
            StabilizerTableau copy = tab;
            plus += copy.measure_z(q, rng) == 1 ? 1 : 0;
        }
        ++report.frequency_checks;
        const double freq = static_cast<double>(plus) / static_cast<double>(opts.shots);
        const double se = std::sqrt(p_plus * (1.0 - p_plus) / static_cast<double>(opts.shots));
        if (se < kTol) {
            if (std::abs(freq - p_plus) > kTol) {
                fail(seq, "deterministic outcome sampled with the wrong value");
            }
        } else {
            const double sigma = std::abs(freq - p_plus) / se;
            report.worst_frequency_sigma = std::max(report.worst_frequency_sigma, sigma);
            if (sigma > 4.0) {
                std::ostringstream msg;
                msg << "frequency " << freq << " vs probability " << p_plus << " (" << sigma << " sigma)";
                fail(seq, msg.str());
            }
        }
        ++report.sequences;
    }
    return report;
}

}  // namespace arbor
