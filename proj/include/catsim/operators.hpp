// operators.hpp - qubit (x) oscillator operators as sums of product terms.
//
// Basis ordering: index = s * (n_d + 1) + m, qubit level s in {0, 1}
// (|0> is the excited state, sigma_z |0> = +|0>), Fock level m ascending.

#pragma once

#include <vector>

#include "catsim/types.hpp"

namespace catsim::ops {

enum class Osc { identity, number, lower, raise };

/// One product term qubit (x) osc, with the scalar coefficient folded into
/// the 2x2 qubit matrix.
struct Term {
    Mat2 qubit;
    Osc osc;
};

using Operator = std::vector<Term>;

inline Mat2 pauli_x() { Mat2 m; m << 0, 1, 1, 0; return m; }
inline Mat2 pauli_y() { Mat2 m; m << 0, -kI, kI, 0; return m; }
inline Mat2 pauli_z() { Mat2 m; m << 1, 0, 0, -1; return m; }
/// |0><1|: ground |1> to excited |0>.
inline Mat2 sigma_plus() { Mat2 m; m << 0, 1, 0, 0; return m; }
inline Mat2 sigma_minus() { Mat2 m; m << 0, 0, 1, 0; return m; }

inline Osc adjoint(Osc o) {
    switch (o) {
        case Osc::lower: return Osc::raise;
        case Osc::raise: return Osc::lower;
        default: return o;
    }
}

inline Term adjoint(const Term& t) { return Term{t.qubit.adjoint(), adjoint(t.osc)}; }

/// Precomputed ladder factors for one truncation.
class Ladder {
public:
    explicit Ladder(int levels) : levels_(levels), sqrt_(levels > 1 ? levels - 1 : 0), num_(levels) {
        for (int m = 0; m < levels; ++m) num_[m] = m;
        for (int m = 1; m < levels; ++m) sqrt_[m - 1] = std::sqrt(static_cast<double>(m));
    }
    int levels() const { return levels_; }

    /// out += c * osc * in, acting on the rows of an oscillator block.
    template <class In, class Out>
    void accumulate(Osc osc, cplx c, const In& in, Out&& out) const {
        const int n = levels_;
        switch (osc) {
            case Osc::identity:
                out += c * in;
                break;
            case Osc::number:
                out += c * (num_.asDiagonal() * in);
                break;
            case Osc::lower:
                if (n > 1) out.topRows(n - 1) += c * (sqrt_.asDiagonal() * in.bottomRows(n - 1));
                break;
            case Osc::raise:
                if (n > 1) out.bottomRows(n - 1) += c * (sqrt_.asDiagonal() * in.topRows(n - 1));
                break;
        }
    }

private:
    int levels_;
    RVec sqrt_;
    RVec num_;
};

/// out += op * x, where x has 2 * levels rows and any number of columns.
template <class In>
void apply_left(const Operator& op, const Ladder& ladder, const In& x, CMat& out) {
    const int n = ladder.levels();
    for (const Term& term : op) {
        for (int s = 0; s < 2; ++s) {
            for (int u = 0; u < 2; ++u) {
                const cplx c = term.qubit(s, u);
                if (c == cplx{0.0, 0.0}) continue;
                ladder.accumulate(term.osc, c, x.middleRows(u * n, n), out.middleRows(s * n, n));
            }
        }
    }
}

inline void apply_left(const Term& term, const Ladder& ladder, const CMat& x, CMat& out) {
    apply_left(Operator{term}, ladder, x, out);
}

/// Dense matrix of an operator on levels 0..levels-1, lower triangle filled
/// from the upper so that Hermitian operators come out exactly Hermitian.
inline CMat dense(const Operator& op, int levels, bool hermitian) {
    const int d = 2 * levels;
    CMat id = CMat::Identity(d, d);
    CMat out = CMat::Zero(d, d);
    apply_left(op, Ladder(levels), id, out);
    if (hermitian) {
        for (int j = 0; j < d; ++j) {
            out(j, j) = cplx{out(j, j).real(), 0.0};
            for (int i = j + 1; i < d; ++i) out(i, j) = std::conj(out(j, i));
        }
    }
    return out;
}

}  // namespace catsim::ops
