#include "primecvp/gf2.hpp"

#include <utility>

#include "primecvp/errors.hpp"

namespace primecvp {

std::vector<BitRow> gf2_nullspace(const std::vector<BitRow>& rows) {
    const std::size_t m = rows.size();
    if (m == 0) return {};
    const std::size_t width = rows.front().size();
    std::vector<BitRow> a = rows;
    std::vector<BitRow> track(m, BitRow(m));
    for (std::size_t i = 0; i < m; ++i) {
        if (a[i].size() != width) throw InvalidArgument("gf2_nullspace: ragged rows");
        track[i].set(i);
    }

    std::size_t pivot = 0;
    for (std::size_t col = 0; col < width && pivot < m; ++col) {
        std::size_t r = pivot;
        while (r < m && !a[r].test(col)) ++r;
        if (r == m) continue;
        std::swap(a[r], a[pivot]);
        std::swap(track[r], track[pivot]);
        for (std::size_t k = pivot + 1; k < m; ++k) {
            if (a[k].test(col)) {
                a[k] ^= a[pivot];
                track[k] ^= track[pivot];
            }
        }
        ++pivot;
    }
    // Rows below the last pivot were reduced to zero; their histories are
    // independent dependencies.
    return {track.begin() + static_cast<std::ptrdiff_t>(pivot), track.end()};
}

}  // namespace primecvp
