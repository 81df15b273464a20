#ifndef TCR_TYPES_HPP
#define TCR_TYPES_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace tcr {

using VertexId = std::uint32_t;
using SimplexIndex = std::int64_t;

inline constexpr SimplexIndex kNoIndex = -1;

/// GF(2) chain: strictly increasing filtration indices. low = back().
using Chain = std::vector<SimplexIndex>;

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidInput : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A configured budget (simplex count, column storage, recursion work) was exceeded.
struct BudgetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InternalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Budgets {
    std::int64_t max_simplices = 50'000'000;
    std::int64_t max_column_entries = 200'000'000;
    std::int64_t max_recursion_ops = 500'000'000;
    int m_max = 20;
};

}  // namespace tcr

#endif
