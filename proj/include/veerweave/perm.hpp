#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace veerweave {

// Permutation of {0,1,2,3}; perm[i] is the image of i.
class Perm4 {
public:
    constexpr Perm4() : img_{0, 1, 2, 3} {}
    constexpr Perm4(int a, int b, int c, int d)
        : img_{static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b),
               static_cast<std::uint8_t>(c), static_cast<std::uint8_t>(d)} {}

    constexpr int operator[](int i) const { return img_[static_cast<std::size_t>(i)]; }

    constexpr Perm4 inverse() const {
        Perm4 out;
        for (int i = 0; i < 4; ++i) out.img_[img_[i]] = static_cast<std::uint8_t>(i);
        return out;
    }

    // (p * q)[i] = p[q[i]]
    constexpr Perm4 operator*(const Perm4& q) const {
        Perm4 out;
        for (int i = 0; i < 4; ++i) out.img_[i] = img_[q.img_[i]];
        return out;
    }

    constexpr int sign() const {
        int inversions = 0;
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j)
                if (img_[i] > img_[j]) ++inversions;
        return inversions % 2 == 0 ? 1 : -1;
    }

    constexpr bool valid() const {
        unsigned seen = 0;
        for (auto v : img_) {
            if (v > 3) return false;
            seen |= 1u << v;
        }
        return seen == 0xFu;
    }

    constexpr bool operator==(const Perm4&) const = default;

    std::string str() const {
        std::string s(4, '0');
        for (int i = 0; i < 4; ++i) s[static_cast<std::size_t>(i)] = static_cast<char>('0' + img_[i]);
        return s;
    }

    // Parses the 4-character image string, e.g. "1023".
    static Perm4 parse(std::string_view s) {
        if (s.size() != 4) throw std::invalid_argument("permutation must have 4 characters: '" + std::string(s) + "'");
        Perm4 p;
        for (std::size_t i = 0; i < 4; ++i) {
            if (s[i] < '0' || s[i] > '3')
                throw std::invalid_argument("permutation character out of range: '" + std::string(s) + "'");
            p.img_[i] = static_cast<std::uint8_t>(s[i] - '0');
        }
        if (!p.valid()) throw std::invalid_argument("not a permutation: '" + std::string(s) + "'");
        return p;
    }

private:
    std::array<std::uint8_t, 4> img_;
};

// Local edge numbering inside a tetrahedron: 0:01 1:02 2:03 3:12 4:13 5:23.
// Edge i and edge 5-i are opposite.
inline constexpr std::array<std::array<int, 2>, 6> kEdgeVertices{{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

constexpr int edge_index(int a, int b) {
    if (a > b) {
        int t = a;
        a = b;
        b = t;
    }
    constexpr int table[4][4] = {{-1, 0, 1, 2}, {0, -1, 3, 4}, {1, 3, -1, 5}, {2, 4, 5, -1}};
    return table[a][b];
}

constexpr int opposite_edge(int e) { return 5 - e; }

}  // namespace veerweave
