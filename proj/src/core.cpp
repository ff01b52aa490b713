#include "welltris/core.hpp"

#include <algorithm>
#include <string>

namespace welltris {

namespace {

void hash_combine(std::size_t& seed, std::uint64_t v) {
    seed ^= std::hash<std::uint64_t>{}(v) + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
}

void check_bits(int bits) {
    if (bits < 1 || bits > kMaxBits)
        throw SchemaError("bits per dimension must be in [1, " + std::to_string(kMaxBits) +
                          "], got " + std::to_string(bits));
}

}  // namespace

JoinSchema::JoinSchema(std::vector<std::string> attributes, int bits, std::vector<TableSchema> tables)
    : attributes_(std::move(attributes)), bits_(bits), tables_(std::move(tables)) {
    check_bits(bits_);
    if (attributes_.size() * static_cast<std::size_t>(bits_) > kMaxLatticeBits)
        throw SchemaError("lattice too large: d * L must not exceed " + std::to_string(kMaxLatticeBits));
    for (std::size_t i = 1; i < attributes_.size(); ++i)
        if (!(attributes_[i - 1] < attributes_[i]))
            throw SchemaError("attributes must be unique and sorted by name");
    std::vector<bool> seen(attributes_.size(), false);
    for (const auto& t : tables_) {
        if (t.attrs.empty()) throw SchemaError("table '" + t.name + "' has no attributes");
        for (std::size_t i = 0; i < t.attrs.size(); ++i) {
            if (t.attrs[i] >= attributes_.size())
                throw SchemaError("table '" + t.name + "' references unknown attribute index");
            if (i > 0 && t.attrs[i - 1] >= t.attrs[i])
                throw SchemaError("table '" + t.name + "' attributes must be strictly increasing");
            seen[t.attrs[i]] = true;
        }
    }
    if (std::find(seen.begin(), seen.end(), false) != seen.end())
        throw SchemaError("every attribute must belong to at least one table");
}

bool Prefix::is_prefix_of(const Prefix& other) const {
    if (len > other.len) return false;
    return (other.bits >> (other.len - len)) == bits;
}

Volume AxisBox::volume() const {
    Volume v = 1;
    for (const auto& s : sides) {
        if (s.empty()) return 0;
        v *= s.width();
    }
    return v;
}

bool AxisBox::empty() const {
    return std::any_of(sides.begin(), sides.end(), [](const Interval& s) { return s.empty(); });
}

bool AxisBox::contains(const Point& p) const {
    if (p.size() != sides.size()) throw SchemaError("point/box dimension mismatch");
    for (std::size_t i = 0; i < sides.size(); ++i)
        if (!sides[i].contains(p[i])) return false;
    return true;
}

bool AxisBox::contains(const AxisBox& other) const {
    if (other.dims() != dims()) throw SchemaError("box dimension mismatch");
    for (std::size_t i = 0; i < sides.size(); ++i)
        if (other.sides[i].lo < sides[i].lo || other.sides[i].hi > sides[i].hi) return false;
    return true;
}

AxisBox full_space(std::size_t d, int L) {
    check_bits(L);
    return AxisBox{std::vector<Interval>(d, Interval{0, Coord{1} << L})};
}

AxisBox intersect(const AxisBox& a, const AxisBox& b) {
    if (a.dims() != b.dims()) throw SchemaError("box dimension mismatch");
    AxisBox out;
    out.sides.resize(a.dims());
    for (std::size_t i = 0; i < a.dims(); ++i) {
        out.sides[i].lo = std::max(a.sides[i].lo, b.sides[i].lo);
        out.sides[i].hi = std::max(out.sides[i].lo, std::min(a.sides[i].hi, b.sides[i].hi));
    }
    return out;
}

DyadicBox::DyadicBox(int bits, std::vector<Prefix> prefixes) : bits_(bits), prefixes_(std::move(prefixes)) {
    check_bits(bits_);
    for (const auto& p : prefixes_) {
        if (p.len < 0 || p.len > bits_) throw SchemaError("prefix length out of range");
        if (p.len < 64 && (p.bits >> p.len) != 0) throw SchemaError("prefix bits exceed prefix length");
    }
}

DyadicBox DyadicBox::whole(std::size_t d, int bits) {
    return DyadicBox(bits, std::vector<Prefix>(d));
}

Volume DyadicBox::volume() const {
    Volume v = 1;
    for (const auto& p : prefixes_) v <<= (bits_ - p.len);
    return v;
}

std::size_t DyadicBoxHash::operator()(const DyadicBox& b) const noexcept {
    std::size_t seed = b.dims();
    for (const auto& p : b.prefixes()) {
        hash_combine(seed, static_cast<std::uint64_t>(p.len));
        hash_combine(seed, p.bits);
    }
    return seed;
}

std::size_t PointHash::operator()(const Point& p) const noexcept {
    std::size_t seed = p.size();
    for (auto c : p) hash_combine(seed, c);
    return seed;
}

bool dyadic_contains_point(const DyadicBox& box, const Point& p) {
    if (box.dims() != p.size()) throw SchemaError("point/box dimension mismatch");
    const Coord n = Coord{1} << box.bits();
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] >= n) throw SchemaError("coordinate does not fit in the box's bit length");
        if (!box[i].matches(p[i], box.bits())) return false;
    }
    return true;
}

bool dyadic_contains_box(const DyadicBox& outer, const DyadicBox& inner) {
    if (outer.dims() != inner.dims() || outer.bits() != inner.bits())
        throw SchemaError("dyadic box schema mismatch");
    for (std::size_t i = 0; i < outer.dims(); ++i)
        if (!outer[i].is_prefix_of(inner[i])) return false;
    return true;
}

AxisBox dyadic_to_axis(const DyadicBox& box) {
    AxisBox out;
    out.sides.reserve(box.dims());
    for (const auto& p : box.prefixes()) {
        const int shift = box.bits() - p.len;
        out.sides.push_back(Interval{p.bits << shift, (p.bits + 1) << shift});
    }
    return out;
}

namespace {

void enumerate_rec(const Point& p, int bits, const std::vector<bool>& active, std::size_t dim,
                   std::vector<Prefix>& cur, const std::function<void(const DyadicBox&)>& fn) {
    if (dim == p.size()) {
        fn(DyadicBox(bits, cur));
        return;
    }
    if (!active[dim]) {
        cur[dim] = Prefix{};
        enumerate_rec(p, bits, active, dim + 1, cur, fn);
        return;
    }
    for (int len = 0; len <= bits; ++len) {
        cur[dim] = Prefix{p[dim] >> (bits - len), len};
        enumerate_rec(p, bits, active, dim + 1, cur, fn);
    }
}

}  // namespace

std::vector<DyadicBox> enumerate_containing_dyadic(const Point& p, int bits,
                                                   const std::vector<std::size_t>& dims) {
    check_bits(bits);
    if (dims.empty()) throw SchemaError("dimension subset must be nonempty");
    std::vector<bool> active(p.size(), false);
    for (auto d : dims) {
        if (d >= p.size()) throw SchemaError("dimension index out of range");
        active[d] = true;
    }
    for (auto c : p)
        if (c >> bits) throw SchemaError("coordinate does not fit in bit length");
    std::vector<DyadicBox> out;
    std::vector<Prefix> cur(p.size());
    enumerate_rec(p, bits, active, 0, cur, [&](const DyadicBox& b) { out.push_back(b); });
    return out;
}

void for_each_containing_dyadic(const Point& p, int bits,
                                const std::function<void(const DyadicBox&)>& fn) {
    std::vector<bool> active(p.size(), true);
    std::vector<Prefix> cur(p.size());
    enumerate_rec(p, bits, active, 0, cur, fn);
}

DyadicBox lift_to_global(const DyadicBox& local, const TableSchema& table, std::size_t global_dims) {
    if (local.dims() != table.dims()) throw SchemaError("box dimensionality does not match table");
    std::vector<Prefix> out(global_dims);
    for (std::size_t i = 0; i < table.attrs.size(); ++i) {
        if (table.attrs[i] >= global_dims) throw SchemaError("table attribute outside global schema");
        out[table.attrs[i]] = local[i];
    }
    return DyadicBox(local.bits(), std::move(out));
}

Point project(const Point& global, const TableSchema& table) {
    Point out;
    out.reserve(table.attrs.size());
    for (auto a : table.attrs) {
        if (a >= global.size()) throw SchemaError("table attribute outside point dimensionality");
        out.push_back(global[a]);
    }
    return out;
}

std::string to_string(Volume v) {
    if (v == 0) return "0";
    std::string s;
    while (v > 0) {
        s.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
        v /= 10;
    }
    std::reverse(s.begin(), s.end());
    return s;
}

}  // namespace welltris
