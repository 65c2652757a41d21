#ifndef MODCONG_HEILBRONN_HPP
#define MODCONG_HEILBRONN_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace modcong {

struct Heil {
    int64_t a, b, c, d;  // [[a, b], [c, d]], determinant = p
};

namespace heildetail {

// nearest integer to a/b, halves away from zero
inline int64_t round_div(int64_t a, int64_t b) {
    int64_t aa = a < 0 ? -a : a, bb = b < 0 ? -b : b;
    int64_t q = (2 * aa + bb) / (2 * bb);
    return ((a < 0) != (b < 0)) ? -q : q;
}

inline std::vector<Heil> build(int64_t p) {
    std::vector<Heil> out;
    if (p == 2) {
        out = {{1, 0, 0, 2}, {2, 0, 0, 1}, {2, 1, 0, 1}, {1, 0, 1, 2}};
        return out;
    }
    out.push_back({1, 0, 0, p});
    for (int64_t r = -(p - 1) / 2; r <= (p - 1) / 2; ++r) {
        int64_t x1 = p, x2 = -r, y1 = 0, y2 = 1;
        int64_t a = -p, b = r;
        out.push_back({x1, x2, y1, y2});
        while (b != 0) {
            int64_t q = round_div(a, b);
            int64_t c = a - b * q;
            a = -b;
            b = c;
            int64_t x3 = q * x2 - x1;
            x1 = x2; x2 = x3;
            int64_t y3 = q * y2 - y1;
            y1 = y2; y2 = y3;
            out.push_back({x1, x2, y1, y2});
        }
    }
    return out;
}

}  // namespace heildetail

// Heilbronn-Cremona matrices of determinant p (p prime), cached.
inline std::shared_ptr<const std::vector<Heil>> heilbronn_matrices(int64_t p) {
    static std::mutex mtx;
    static std::map<int64_t, std::shared_ptr<const std::vector<Heil>>> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(p);
    if (it != cache.end()) return it->second;
    auto v = std::make_shared<const std::vector<Heil>>(heildetail::build(p));
    for (const auto& h : *v)
        if (h.a * h.d - h.b * h.c != p)
            throw std::logic_error("heilbronn_matrices: determinant mismatch");
    cache[p] = v;
    return v;
}

}  // namespace modcong

#endif
