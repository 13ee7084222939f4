#include "milnor_oracle.hpp"

#include <cmath>
#include <map>
#include <vector>

namespace germflow::oracle {

namespace {

struct MonomialIndex {
    std::map<std::pair<int, int>, int> index;
    int count = 0;

    explicit MonomialIndex(int max_degree) {
        for (int a = 0; a <= max_degree; ++a)
            for (int b = 0; a + b <= max_degree; ++b) index[{a, b}] = count++;
    }
};

// rank of a dense row-major matrix by elimination with partial pivoting and
// a relative threshold
int rank_of(std::vector<std::vector<double>> rows) {
    int rank = 0;
    const std::size_t cols = rows.empty() ? 0 : rows[0].size();
    double max_entry = 0.0;
    for (const auto& row : rows)
        for (double v : row) max_entry = std::max(max_entry, std::abs(v));
    if (max_entry == 0.0) return 0;
    const double threshold = 1e-9 * max_entry;

    std::size_t pivot_row = 0;
    for (std::size_t col = 0; col < cols && pivot_row < rows.size(); ++col) {
        std::size_t best = pivot_row;
        for (std::size_t r = pivot_row + 1; r < rows.size(); ++r)
            if (std::abs(rows[r][col]) > std::abs(rows[best][col])) best = r;
        if (std::abs(rows[best][col]) <= threshold) continue;
        std::swap(rows[pivot_row], rows[best]);
        for (std::size_t r = pivot_row + 1; r < rows.size(); ++r) {
            const double factor = rows[r][col] / rows[pivot_row][col];
            if (factor == 0.0) continue;
            for (std::size_t c = col; c < cols; ++c) rows[r][c] -= factor * rows[pivot_row][c];
        }
        ++pivot_row;
        ++rank;
    }
    return rank;
}

}  // namespace

int milnor_number_2d(const Polynomial& f, int max_degree) {
    if (f.nvars() != 2) throw InputError("milnor_number_2d: expects a polynomial in 2 variables");
    const MonomialIndex monomials(max_degree);

    std::vector<std::vector<double>> rows;
    for (int var = 0; var < 2; ++var) {
        const Polynomial partial = f.partial(var);
        if (partial.is_zero()) continue;
        // multiply by every monomial multiplier, truncating products at the
        // degree cap (multiplication in C[x,y]/m^{D+1})
        for (int ma = 0; ma <= max_degree; ++ma) {
            for (int mb = 0; ma + mb <= max_degree; ++mb) {
                std::vector<double> row(static_cast<std::size_t>(monomials.count), 0.0);
                bool nonzero = false;
                for (const auto& [e, c] : partial.terms()) {
                    const int a = e[0] + ma, b = e[1] + mb;
                    if (a + b > max_degree) continue;
                    row[static_cast<std::size_t>(monomials.index.at({a, b}))] += c.real();
                    nonzero = true;
                }
                if (nonzero) rows.push_back(std::move(row));
            }
        }
    }
    return monomials.count - rank_of(std::move(rows));
}

}  // namespace germflow::oracle
