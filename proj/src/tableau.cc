#include "arbor/tableau.h"

#include <algorithm>
#include <bit>
#include <sstream>
#include <stdexcept>

namespace arbor {
namespace {

std::size_t words_for(std::size_t n) { return (n + 63) / 64; }

std::uint64_t bit(std::size_t q) { return std::uint64_t{1} << (q % 64); }

// Rank over GF(2) of `count` rows of `width` words each (destroys the input).
std::size_t gf2_rank(std::vector<std::uint64_t>& rows, std::size_t count, std::size_t width) {
    std::size_t rank = 0;
    for (std::size_t w = 0; w < width && rank < count; ++w) {
        for (int b = 0; b < 64 && rank < count; ++b) {
            const std::uint64_t mask = std::uint64_t{1} << b;
            std::size_t pivot = rank;
            while (pivot < count && !(rows[pivot * width + w] & mask)) {
                ++pivot;
            }
            if (pivot == count) {
                continue;
            }
            if (pivot != rank) {
                std::swap_ranges(rows.begin() + pivot * width, rows.begin() + (pivot + 1) * width,
                                 rows.begin() + rank * width);
            }
            for (std::size_t r = rank + 1; r < count; ++r) {
                if (rows[r * width + w] & mask) {
                    for (std::size_t k = w; k < width; ++k) {
                        rows[r * width + k] ^= rows[rank * width + k];
                    }
                }
            }
            ++rank;
        }
    }
    return rank;
}

}  // namespace

StabilizerTableau::StabilizerTableau(std::size_t n)
    : n_(n), words_(words_for(n)), roles_(n, QubitRole::Ancilla) {}

StabilizerTableau StabilizerTableau::zero_state(std::size_t n) {
    StabilizerTableau t(n);
    t.xs_.assign(n * t.words_, 0);
    t.zs_.assign(n * t.words_, 0);
    t.signs_.assign(n, 0);
    for (std::size_t q = 0; q < n; ++q) {
        t.set_bits(q, q, false, true);
    }
    return t;
}

StabilizerTableau StabilizerTableau::from_strings(const std::vector<std::string>& generators) {
    if (generators.empty()) {
        throw std::invalid_argument("from_strings needs at least one generator to fix n");
    }
    std::string_view first = generators.front();
    if (!first.empty() && (first[0] == '+' || first[0] == '-')) {
        first.remove_prefix(1);
    }
    StabilizerTableau t(first.size());
    for (const std::string& g : generators) {
        t.add_generator(g);
    }
    return t;
}

bool StabilizerTableau::xbit(std::size_t row, std::size_t q) const { return xrow(row)[q / 64] & bit(q); }

bool StabilizerTableau::zbit(std::size_t row, std::size_t q) const { return zrow(row)[q / 64] & bit(q); }

void StabilizerTableau::set_bits(std::size_t row, std::size_t q, bool x, bool z) {
    std::uint64_t& xw = xrow(row)[q / 64];
    std::uint64_t& zw = zrow(row)[q / 64];
    xw = x ? (xw | bit(q)) : (xw & ~bit(q));
    zw = z ? (zw | bit(q)) : (zw & ~bit(q));
}

void StabilizerTableau::check_qubit(std::size_t q) const {
    if (q >= n_) {
        std::ostringstream msg;
        msg << "qubit index " << q << " out of range for " << n_ << " qubits";
        throw std::out_of_range(msg.str());
    }
}

std::string StabilizerTableau::generator_string(std::size_t row) const {
    if (row >= num_generators()) {
        throw std::out_of_range("generator index out of range");
    }
    std::string out(1, signs_[row] ? '-' : '+');
    for (std::size_t q = 0; q < n_; ++q) {
        const bool x = xbit(row, q);
        const bool z = zbit(row, q);
        out += x ? (z ? 'Y' : 'X') : (z ? 'Z' : 'I');
    }
    return out;
}

std::vector<std::string> StabilizerTableau::generator_strings() const {
    std::vector<std::string> out;
    for (std::size_t r = 0; r < num_generators(); ++r) {
        out.push_back(generator_string(r));
    }
    return out;
}

void StabilizerTableau::add_generator(std::string_view pauli) {
    bool negative = false;
    if (!pauli.empty() && (pauli[0] == '+' || pauli[0] == '-')) {
        negative = pauli[0] == '-';
        pauli.remove_prefix(1);
    }
    if (pauli.size() != n_) {
        throw std::invalid_argument("generator '" + std::string(pauli) + "' has the wrong length");
    }
    const std::size_t row = num_generators();
    xs_.resize(xs_.size() + words_, 0);
    zs_.resize(zs_.size() + words_, 0);
    signs_.push_back(negative ? 1 : 0);
    for (std::size_t q = 0; q < n_; ++q) {
        switch (pauli[q]) {
            case 'I':
                break;
            case 'X':
                set_bits(row, q, true, false);
                break;
            case 'Y':
                set_bits(row, q, true, true);
                break;
            case 'Z':
                set_bits(row, q, false, true);
                break;
            default:
                remove_row(row);
                throw std::invalid_argument("bad Pauli character in '" + std::string(pauli) + "'");
        }
    }
    auto problems = invariant_violations();
    if (!problems.empty()) {
        remove_row(row);
        throw std::invalid_argument("generator '" + std::string(pauli) + "' rejected: " + problems.front());
    }
}

std::size_t StabilizerTableau::append_qubit(QubitRole role) {
    const std::size_t new_words = words_for(n_ + 1);
    if (new_words != words_) {
        std::vector<std::uint64_t> xs(num_generators() * new_words, 0);
        std::vector<std::uint64_t> zs(num_generators() * new_words, 0);
        for (std::size_t r = 0; r < num_generators(); ++r) {
            std::copy_n(xrow(r), words_, xs.begin() + r * new_words);
            std::copy_n(zrow(r), words_, zs.begin() + r * new_words);
        }
        xs_ = std::move(xs);
        zs_ = std::move(zs);
        words_ = new_words;
    }
    roles_.push_back(role);
    return n_++;
}

void StabilizerTableau::multiply_into(std::size_t target, std::size_t source) {
    std::uint64_t* xt = xrow(target);
    std::uint64_t* zt = zrow(target);
    const std::uint64_t* xa = xrow(source);
    const std::uint64_t* za = zrow(source);
    int phase = 0;
    for (std::size_t w = 0; w < words_; ++w) {
        const std::uint64_t ax = xa[w] & ~za[w], az = ~xa[w] & za[w], ay = xa[w] & za[w];
        const std::uint64_t bx = xt[w] & ~zt[w], bz = ~xt[w] & zt[w], by = xt[w] & zt[w];
        const std::uint64_t plus = (ax & by) | (az & bx) | (ay & bz);
        const std::uint64_t minus = (ax & bz) | (az & by) | (ay & bx);
        phase += std::popcount(plus) - std::popcount(minus);
        xt[w] ^= xa[w];
        zt[w] ^= za[w];
    }
    phase = ((phase % 4) + 4) % 4;
    if (phase % 2 != 0) {
        throw std::logic_error("multiplied anticommuting stabilizer generators");
    }
    signs_[target] ^= signs_[source] ^ (phase == 2 ? 1 : 0);
}

void StabilizerTableau::remove_row(std::size_t row) {
    const std::size_t last = num_generators() - 1;
    if (row != last) {
        std::copy_n(xrow(last), words_, xrow(row));
        std::copy_n(zrow(last), words_, zrow(row));
        signs_[row] = signs_[last];
    }
    xs_.resize(last * words_);
    zs_.resize(last * words_);
    signs_.pop_back();
}

void StabilizerTableau::apply_clifford(const TwoQubitClifford& g, std::size_t q1, std::size_t q2) {
    check_qubit(q1);
    check_qubit(q2);
    if (q1 == q2) {
        throw std::invalid_argument("two-qubit gate needs distinct qubits");
    }
    for (std::size_t r = 0; r < num_generators(); ++r) {
        const PauliBits p = static_cast<PauliBits>(xbit(r, q1) | zbit(r, q1) << 1 | xbit(r, q2) << 2 |
                                                   zbit(r, q2) << 3);
        const auto [img, flip] = g.conjugate(p);
        set_bits(r, q1, img & 1, img & 2);
        set_bits(r, q2, img & 4, img & 8);
        signs_[r] ^= flip ? 1 : 0;
    }
}

void StabilizerTableau::apply_h(std::size_t q) {
    check_qubit(q);
    for (std::size_t r = 0; r < num_generators(); ++r) {
        const bool x = xbit(r, q), z = zbit(r, q);
        signs_[r] ^= (x && z) ? 1 : 0;
        set_bits(r, q, z, x);
    }
}

void StabilizerTableau::apply_s(std::size_t q) {
    check_qubit(q);
    for (std::size_t r = 0; r < num_generators(); ++r) {
        const bool x = xbit(r, q), z = zbit(r, q);
        signs_[r] ^= (x && z) ? 1 : 0;
        set_bits(r, q, x, z != x);
    }
}

void StabilizerTableau::apply_cnot(std::size_t control, std::size_t target) {
    check_qubit(control);
    check_qubit(target);
    if (control == target) {
        throw std::invalid_argument("CNOT needs distinct qubits");
    }
    for (std::size_t r = 0; r < num_generators(); ++r) {
        const bool xc = xbit(r, control), zc = zbit(r, control);
        const bool xt = xbit(r, target), zt = zbit(r, target);
        signs_[r] ^= (xc && zt && (xt == zc)) ? 1 : 0;
        set_bits(r, target, xt != xc, zt);
        set_bits(r, control, xc, zc != zt);
    }
}

void StabilizerTableau::apply_cz(std::size_t a, std::size_t b) {
    apply_h(b);
    apply_cnot(a, b);
    apply_h(b);
}

void StabilizerTableau::apply_x(std::size_t q) {
    check_qubit(q);
    for (std::size_t r = 0; r < num_generators(); ++r) {
        signs_[r] ^= zbit(r, q) ? 1 : 0;
    }
}

void StabilizerTableau::apply_z(std::size_t q) {
    check_qubit(q);
    for (std::size_t r = 0; r < num_generators(); ++r) {
        signs_[r] ^= xbit(r, q) ? 1 : 0;
    }
}

int StabilizerTableau::z_membership(std::size_t q) const {
    // Reduced row echelon form on a copy, with one scratch row for the product.
    StabilizerTableau work = *this;
    const std::size_t k = work.num_generators();
    std::vector<std::pair<std::size_t, std::size_t>> pivots;  // (row, column); column < n is x
    std::size_t rank = 0;
    for (std::size_t col = 0; col < 2 * n_ && rank < k; ++col) {
        auto has = [&](std::size_t r) { return col < n_ ? work.xbit(r, col) : work.zbit(r, col - n_); };
        std::size_t pivot = rank;
        while (pivot < k && !has(pivot)) {
            ++pivot;
        }
        if (pivot == k) {
            continue;
        }
        if (pivot != rank) {
            std::swap_ranges(work.xrow(pivot), work.xrow(pivot) + words_, work.xrow(rank));
            std::swap_ranges(work.zrow(pivot), work.zrow(pivot) + words_, work.zrow(rank));
            std::swap(work.signs_[pivot], work.signs_[rank]);
        }
        for (std::size_t r = 0; r < k; ++r) {
            if (r != rank && has(r)) {
                work.multiply_into(r, rank);
            }
        }
        pivots.emplace_back(rank, col);
        ++rank;
    }
    // In reduced form a pivot column is set only in its pivot row, so Z_q is
    // in the span iff it equals the product of the rows whose pivots it hits.
    const std::size_t scratch = k;
    work.xs_.resize(work.xs_.size() + words_, 0);
    work.zs_.resize(work.zs_.size() + words_, 0);
    work.signs_.push_back(0);
    for (const auto& [row, col] : pivots) {
        if (col == n_ + q) {
            work.multiply_into(scratch, row);
        }
    }
    for (std::size_t w = 0; w < words_; ++w) {
        const std::uint64_t expect_z = (w == q / 64) ? bit(q) : 0;
        if (work.xrow(scratch)[w] != 0 || work.zrow(scratch)[w] != expect_z) {
            return -1;
        }
    }
    return work.signs_[scratch];
}

double StabilizerTableau::z_probability(std::size_t q, int outcome) const {
    check_qubit(q);
    if (outcome != 1 && outcome != -1) {
        throw std::invalid_argument("measurement outcome must be +1 or -1");
    }
    for (std::size_t r = 0; r < num_generators(); ++r) {
        if (xbit(r, q)) {
            return 0.5;
        }
    }
    const int m = z_membership(q);
    if (m < 0) {
        return 0.5;
    }
    return (m == 0) == (outcome == 1) ? 1.0 : 0.0;
}

int StabilizerTableau::measure_z(std::size_t q, Rng& rng) {
    int outcome = 0;
    project_z(q, 0, &rng, outcome);
    return outcome;
}

double StabilizerTableau::postselect_z(std::size_t q, int outcome) {
    if (outcome != 1 && outcome != -1) {
        throw std::invalid_argument("measurement outcome must be +1 or -1");
    }
    int realized = 0;
    return project_z(q, outcome, nullptr, realized);
}

double StabilizerTableau::project_z(std::size_t q, int forced, Rng* rng, int& outcome) {
    check_qubit(q);
    auto pick = [&] {
        if (forced != 0) {
            return forced;
        }
        return (rng != nullptr && ((*rng)() >> 63)) ? -1 : 1;
    };
    std::size_t anti = num_generators();
    for (std::size_t r = 0; r < num_generators(); ++r) {
        if (xbit(r, q)) {
            if (anti == num_generators()) {
                anti = r;
            } else {
                multiply_into(r, anti);
            }
        }
    }
    if (anti != num_generators()) {
        outcome = pick();
        std::fill_n(xrow(anti), words_, 0);
        std::fill_n(zrow(anti), words_, 0);
        set_bits(anti, q, false, true);
        signs_[anti] = outcome == 1 ? 0 : 1;
        return 0.5;
    }
    const int m = z_membership(q);
    if (m >= 0) {
        outcome = m == 0 ? 1 : -1;
        return forced == 0 || forced == outcome ? 1.0 : 0.0;
    }
    outcome = pick();
    const std::size_t row = num_generators();
    xs_.resize(xs_.size() + words_, 0);
    zs_.resize(zs_.size() + words_, 0);
    signs_.push_back(outcome == 1 ? 0 : 1);
    set_bits(row, q, false, true);
    return 0.5;
}

void StabilizerTableau::drop_support(std::size_t q) {
    check_qubit(q);
    const std::size_t none = num_generators();
    std::size_t px = none;
    for (std::size_t r = 0; r < num_generators(); ++r) {
        if (xbit(r, q)) {
            if (px == none) {
                px = r;
            } else {
                multiply_into(r, px);
            }
        }
    }
    std::size_t pz = none;
    for (std::size_t r = 0; r < num_generators(); ++r) {
        if (r != px && zbit(r, q)) {
            if (pz == none) {
                pz = r;
            } else {
                multiply_into(r, pz);
            }
        }
    }
    // Remove the higher index first so the other stays valid.
    if (px != none && pz != none) {
        remove_row(std::max(px, pz));
        remove_row(std::min(px, pz));
    } else if (px != none) {
        remove_row(px);
    } else if (pz != none) {
        remove_row(pz);
    }
}

void StabilizerTableau::trace_out(std::size_t q) {
    drop_support(q);
    const std::size_t new_words = words_for(n_ - 1);
    std::vector<std::uint64_t> xs(num_generators() * new_words, 0);
    std::vector<std::uint64_t> zs(num_generators() * new_words, 0);
    for (std::size_t r = 0; r < num_generators(); ++r) {
        for (std::size_t j = 0, out = 0; j < n_; ++j) {
            if (j == q) {
                continue;
            }
            if (xbit(r, j)) {
                xs[r * new_words + out / 64] |= bit(out);
            }
            if (zbit(r, j)) {
                zs[r * new_words + out / 64] |= bit(out);
            }
            ++out;
        }
    }
    xs_ = std::move(xs);
    zs_ = std::move(zs);
    words_ = new_words;
    roles_.erase(roles_.begin() + static_cast<std::ptrdiff_t>(q));
    --n_;
}

void StabilizerTableau::reset_mixed(std::size_t q) { drop_support(q); }

int StabilizerTableau::entropy(std::span<const std::size_t> subset) const {
    std::vector<bool> in_a(n_, false);
    for (std::size_t q : subset) {
        check_qubit(q);
        if (in_a[q]) {
            throw std::invalid_argument("entropy subset has a repeated qubit");
        }
        in_a[q] = true;
    }
    // Restrict every generator to the complement of A.
    std::vector<std::uint64_t> mask(words_, 0);
    for (std::size_t q = 0; q < n_; ++q) {
        if (!in_a[q]) {
            mask[q / 64] |= bit(q);
        }
    }
    const std::size_t k = num_generators();
    std::vector<std::uint64_t> rows(k * 2 * words_);
    for (std::size_t r = 0; r < k; ++r) {
        for (std::size_t w = 0; w < words_; ++w) {
            rows[r * 2 * words_ + w] = xrow(r)[w] & mask[w];
            rows[r * 2 * words_ + words_ + w] = zrow(r)[w] & mask[w];
        }
    }
    const std::size_t rank_outside = gf2_rank(rows, k, 2 * words_);
    return static_cast<int>(subset.size()) - static_cast<int>(k) + static_cast<int>(rank_outside);
}

std::size_t StabilizerTableau::rank() const {
    const std::size_t k = num_generators();
    std::vector<std::uint64_t> rows(k * 2 * words_);
    for (std::size_t r = 0; r < k; ++r) {
        std::copy_n(xrow(r), words_, rows.begin() + r * 2 * words_);
        std::copy_n(zrow(r), words_, rows.begin() + r * 2 * words_ + words_);
    }
    return gf2_rank(rows, k, 2 * words_);
}

std::vector<std::string> StabilizerTableau::invariant_violations() const {
    std::vector<std::string> out;
    const std::size_t k = num_generators();
    if (k > n_) {
        out.push_back("more generators than qubits");
    }
    if (rank() != k) {
        out.push_back("generators are not independent");
    }
    for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = a + 1; b < k; ++b) {
            int parity = 0;
            for (std::size_t w = 0; w < words_; ++w) {
                parity ^= std::popcount((xrow(a)[w] & zrow(b)[w]) ^ (zrow(a)[w] & xrow(b)[w])) & 1;
            }
            if (parity) {
                out.push_back("generators " + std::to_string(a) + " and " + std::to_string(b) +
                              " anticommute");
            }
        }
    }
    return out;
}

}  // namespace arbor
