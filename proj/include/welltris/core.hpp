#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace welltris {

using Coord = std::uint64_t;
// Lattice volumes reach n^d = 2^64 at L=16, d=4.
using Volume = unsigned __int128;

// A global or table-local lattice point. Coordinates are dictionary codes in [0, 2^L).
using Point = std::vector<Coord>;

inline constexpr int kMaxBits = 32;
// Keeps n^d and inclusion-exclusion sums inside Volume.
inline constexpr std::size_t kMaxLatticeBits = 120;

class SchemaError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct TableSchema {
    std::string name;
    std::vector<std::size_t> attrs;  // global attribute indices, strictly increasing
    std::size_t row_count = 0;

    std::size_t dims() const { return attrs.size(); }
};

class JoinSchema {
public:
    JoinSchema() = default;
    JoinSchema(std::vector<std::string> attributes, int bits, std::vector<TableSchema> tables);

    const std::vector<std::string>& attributes() const { return attributes_; }
    const std::vector<TableSchema>& tables() const { return tables_; }
    std::size_t dims() const { return attributes_.size(); }
    int bits() const { return bits_; }
    Coord domain() const { return Coord{1} << bits_; }

private:
    std::vector<std::string> attributes_;
    int bits_ = 1;
    std::vector<TableSchema> tables_;
};

// One dimension of a dyadic box: the top `len` bits of a coordinate, MSB-first.
// len == 0 is the empty prefix (lambda) and spans the whole dimension.
struct Prefix {
    Coord bits = 0;
    int len = 0;

    bool is_lambda() const { return len == 0; }
    bool is_prefix_of(const Prefix& other) const;
    bool matches(Coord coord, int L) const { return len == 0 || (coord >> (L - len)) == bits; }

    friend bool operator==(const Prefix&, const Prefix&) = default;
    friend auto operator<=>(const Prefix& a, const Prefix& b) {
        if (auto c = a.len <=> b.len; c != 0) return c;
        return a.bits <=> b.bits;
    }
};

struct Interval {
    Coord lo = 0;
    Coord hi = 0;  // exclusive

    Coord width() const { return hi - lo; }
    bool empty() const { return hi <= lo; }
    bool contains(Coord x) const { return lo <= x && x < hi; }

    friend bool operator==(const Interval&, const Interval&) = default;
    friend auto operator<=>(const Interval&, const Interval&) = default;
};

// Half-open integer hyperrectangle.
struct AxisBox {
    std::vector<Interval> sides;

    std::size_t dims() const { return sides.size(); }
    Volume volume() const;
    bool empty() const;
    bool contains(const Point& p) const;
    bool contains(const AxisBox& other) const;

    friend bool operator==(const AxisBox&, const AxisBox&) = default;
    friend auto operator<=>(const AxisBox&, const AxisBox&) = default;
};

// Whole lattice [0, 2^L)^d.
AxisBox full_space(std::size_t d, int L);
// Intersection; may be empty in some dimension.
AxisBox intersect(const AxisBox& a, const AxisBox& b);

class DyadicBox {
public:
    DyadicBox() = default;
    DyadicBox(int bits, std::vector<Prefix> prefixes);

    // All-lambda box over d dimensions.
    static DyadicBox whole(std::size_t d, int bits);

    int bits() const { return bits_; }
    std::size_t dims() const { return prefixes_.size(); }
    const std::vector<Prefix>& prefixes() const { return prefixes_; }
    const Prefix& operator[](std::size_t i) const { return prefixes_[i]; }
    Prefix& operator[](std::size_t i) { return prefixes_[i]; }

    Volume volume() const;

    friend bool operator==(const DyadicBox&, const DyadicBox&) = default;
    friend auto operator<=>(const DyadicBox&, const DyadicBox&) = default;

private:
    int bits_ = 1;
    std::vector<Prefix> prefixes_;
};

struct DyadicBoxHash {
    std::size_t operator()(const DyadicBox& b) const noexcept;
};

struct PointHash {
    std::size_t operator()(const Point& p) const noexcept;
};

bool dyadic_contains_point(const DyadicBox& box, const Point& p);
bool dyadic_contains_box(const DyadicBox& outer, const DyadicBox& inner);
AxisBox dyadic_to_axis(const DyadicBox& box);

// Every dyadic box containing p whose prefixes in `dims` range over the L+1
// prefixes of the coordinate and are lambda elsewhere. Yields (L+1)^|dims| boxes.
std::vector<DyadicBox> enumerate_containing_dyadic(const Point& p, int bits,
                                                   const std::vector<std::size_t>& dims);

// Calls `fn` for each box containing p over all dimensions, without materializing the list.
void for_each_containing_dyadic(const Point& p, int bits,
                                const std::function<void(const DyadicBox&)>& fn);

DyadicBox lift_to_global(const DyadicBox& local, const TableSchema& table, std::size_t global_dims);
inline DyadicBox lift_to_global(const DyadicBox& local, const TableSchema& table,
                                const JoinSchema& schema) {
    return lift_to_global(local, table, schema.dims());
}

// Projection of a global point onto a table's attributes.
Point project(const Point& global, const TableSchema& table);

std::string to_string(Volume v);

}  // namespace welltris
