#include "kmd/linalg.hpp"

#include <algorithm>

#include "kmd/error.hpp"

namespace kmd {

namespace {

// Forward elimination state shared by rank/solve: fraction-free (one-step
// Bareiss) staircase over Z[v,v^-1] after clearing row denominators.
struct Staircase {
    std::vector<std::vector<LaurentPoly>> m;  // rows x (cols [+ rhs])
    std::vector<size_t> pivot_cols;
    size_t data_cols;  // columns belonging to the matrix proper
};

Staircase eliminate(const ExactMatrix& M, const std::vector<RationalFn>* rhs) {
    size_t R = M.rows(), C = M.cols();
    Staircase st;
    st.data_cols = C;
    size_t total = C + (rhs ? 1 : 0);
    st.m.assign(R, std::vector<LaurentPoly>(total));
    for (size_t i = 0; i < R; ++i) {
        // clear denominators of row i (including rhs slot)
        LaurentPoly lcm(1);
        auto fold = [&](const RationalFn& f) {
            const LaurentPoly& d = f.den();
            LaurentPoly q;
            if (LaurentPoly::try_divide(lcm, d, q)) return;  // d already divides lcm
            lcm = lcm * d;  // pragmatic: product; exact divisions below stay valid
        };
        for (size_t j = 0; j < C; ++j) fold(M.at(i, j));
        if (rhs) fold((*rhs)[i]);
        auto clear = [&](const RationalFn& f) {
            return (f * RationalFn(lcm)).as_poly();
        };
        for (size_t j = 0; j < C; ++j) st.m[i][j] = clear(M.at(i, j));
        if (rhs) st.m[i][C] = clear((*rhs)[i]);
    }

    LaurentPoly prev(1);
    size_t row = 0;
    for (size_t col = 0; col < C && row < R; ++col) {
        // pivot: fewest terms, then lowest row index
        size_t best = R;
        for (size_t i = row; i < R; ++i) {
            if (st.m[i][col].is_zero()) continue;
            if (best == R || st.m[i][col].term_count() < st.m[best][col].term_count()) best = i;
        }
        if (best == R) continue;
        std::swap(st.m[row], st.m[best]);
        const LaurentPoly piv = st.m[row][col];
        for (size_t i = row + 1; i < R; ++i) {
            // one-step Bareiss: divisions by the previous pivot are exact
            const LaurentPoly f = st.m[i][col];
            for (size_t j = col; j < total; ++j) {
                LaurentPoly t = st.m[i][j] * piv - f * st.m[row][j];
                st.m[i][j] = t.divide_exact(prev);
            }
        }
        st.pivot_cols.push_back(col);
        prev = piv;
        ++row;
    }
    return st;
}

}  // namespace

ExactMatrix ExactMatrix::identity(size_t n) {
    ExactMatrix m(n, n);
    for (size_t i = 0; i < n; ++i) m.at(i, i) = RationalFn(1);
    return m;
}

ExactMatrix ExactMatrix::operator*(const ExactMatrix& o) const {
    if (cols_ != o.rows_) fail(Errc::DomainError, "matrix product shape mismatch");
    ExactMatrix r(rows_, o.cols_);
    for (size_t i = 0; i < rows_; ++i)
        for (size_t k = 0; k < cols_; ++k) {
            const RationalFn& a = at(i, k);
            if (a.is_zero()) continue;
            for (size_t j = 0; j < o.cols_; ++j) {
                const RationalFn& b = o.at(k, j);
                if (!b.is_zero()) r.at(i, j) += a * b;
            }
        }
    return r;
}

ExactMatrix ExactMatrix::operator+(const ExactMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) fail(Errc::DomainError, "matrix sum shape mismatch");
    ExactMatrix r(rows_, cols_);
    for (size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i] + o.data_[i];
    return r;
}

ExactMatrix ExactMatrix::operator-(const ExactMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) fail(Errc::DomainError, "matrix diff shape mismatch");
    ExactMatrix r(rows_, cols_);
    for (size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i] - o.data_[i];
    return r;
}

ExactMatrix ExactMatrix::scaled(const RationalFn& s) const {
    ExactMatrix r(rows_, cols_);
    for (size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i] * s;
    return r;
}

ExactMatrix ExactMatrix::transpose() const {
    ExactMatrix r(cols_, rows_);
    for (size_t i = 0; i < rows_; ++i)
        for (size_t j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
    return r;
}

bool ExactMatrix::is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const RationalFn& f) { return f.is_zero(); });
}

std::vector<RationalFn> ExactMatrix::apply(const std::vector<RationalFn>& x) const {
    if (x.size() != cols_) fail(Errc::DomainError, "apply shape mismatch");
    std::vector<RationalFn> y(rows_);
    for (size_t i = 0; i < rows_; ++i)
        for (size_t j = 0; j < cols_; ++j)
            if (!at(i, j).is_zero() && !x[j].is_zero()) y[i] += at(i, j) * x[j];
    return y;
}

size_t ExactMatrix::rank() const {
    return eliminate(*this, nullptr).pivot_cols.size();
}

ExactMatrix::Solution ExactMatrix::solve(const std::vector<RationalFn>& rhs) const {
    if (rhs.size() != rows_) fail(Errc::DomainError, "rhs size mismatch");
    Staircase st = eliminate(*this, &rhs);
    size_t R = rows_, C = cols_;
    size_t r = st.pivot_cols.size();

    Solution sol;
    sol.rank = r;
    sol.pivot_cols = st.pivot_cols;
    for (size_t i = r; i < R; ++i)
        if (!st.m[i][C].is_zero()) {
            sol.consistent = false;
            return sol;
        }
    sol.consistent = true;

    std::vector<bool> is_pivot(C, false);
    for (size_t c : st.pivot_cols) is_pivot[c] = true;

    // exact back substitution over Q(v) at fixed free-variable assignments
    auto back_subst = [&](const std::vector<RationalFn>& free_vals, bool use_rhs) {
        std::vector<RationalFn> x(C);
        size_t fi = 0;
        for (size_t j = 0; j < C; ++j)
            if (!is_pivot[j]) x[j] = free_vals[fi++];
        for (size_t k = r; k-- > 0;) {
            size_t pc = st.pivot_cols[k];
            RationalFn acc = use_rhs ? RationalFn(st.m[k][C]) : RationalFn(0);
            for (size_t j = pc + 1; j < C; ++j)
                if (!st.m[k][j].is_zero() && !x[j].is_zero()) acc -= RationalFn(st.m[k][j]) * x[j];
            x[pc] = acc / RationalFn(st.m[k][pc]);
        }
        return x;
    };

    size_t n_free = C - r;
    sol.particular = back_subst(std::vector<RationalFn>(n_free), true);
    for (size_t f = 0; f < n_free; ++f) {
        std::vector<RationalFn> fv(n_free);
        fv[f] = RationalFn(1);
        sol.kernel.push_back(back_subst(fv, false));
    }
    return sol;
}

std::vector<std::vector<RationalFn>> ExactMatrix::kernel() const {
    return solve(std::vector<RationalFn>(rows_)).kernel;
}

ExactMatrix ExactMatrix::solve_matrix(const ExactMatrix& b) const {
    if (rows_ != b.rows_) fail(Errc::DomainError, "solve_matrix shape mismatch");
    ExactMatrix x(cols_, b.cols_);
    for (size_t j = 0; j < b.cols_; ++j) {
        std::vector<RationalFn> rhs(rows_);
        for (size_t i = 0; i < rows_; ++i) rhs[i] = b.at(i, j);
        Solution s = solve(rhs);
        if (!s.consistent || !s.kernel.empty())
            fail(Errc::Inconsistent, "solve_matrix needs an invertible system");
        for (size_t i = 0; i < cols_; ++i) x.at(i, j) = s.particular[i];
    }
    return x;
}

}  // namespace kmd
