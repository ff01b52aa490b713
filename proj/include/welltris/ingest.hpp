#pragma once

#include <filesystem>
#include <istream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "welltris/core.hpp"

namespace welltris {

class IngestError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A CSV table before dictionary encoding. Column order is as in the file.
struct RawTable {
    std::string name;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

RawTable parse_csv(std::istream& in, std::string name);
// Table name is the file stem.
RawTable read_csv(const std::filesystem::path& path);

// Per-attribute dictionary: value <-> dense code, first-seen order across all tables.
class DomainEncoding {
public:
    DomainEncoding() = default;
    DomainEncoding(std::vector<std::string> attributes, int bits);

    int bits() const { return bits_; }
    Coord domain() const { return Coord{1} << bits_; }
    const std::vector<std::string>& attributes() const { return attributes_; }

    std::size_t attribute_index(const std::string& name) const;
    // Returns the existing code or assigns the next one.
    Coord intern(std::size_t attr, const std::string& value);
    Coord encode(std::size_t attr, const std::string& value) const;
    const std::string& decode(std::size_t attr, Coord code) const;
    std::size_t distinct(std::size_t attr) const { return values_.at(attr).size(); }
    const std::vector<std::string>& values(std::size_t attr) const { return values_.at(attr); }

    void set_bits(int bits) { bits_ = bits; }

    // Line format: header `welltris-encoding v1 L=<L>`, then one line per attribute
    // in global order: `<name>,<value code 0>,<value code 1>,...`.
    void write(std::ostream& out) const;
    static DomainEncoding read(std::istream& in);

private:
    std::vector<std::string> attributes_;
    std::unordered_map<std::string, std::size_t> attr_index_;
    std::vector<std::vector<std::string>> values_;
    std::vector<std::unordered_map<std::string, Coord>> codes_;
    int bits_ = 1;
};

// A table as a set of lattice points. Rows are in the table's global attribute order.
struct Relation {
    TableSchema schema;
    int bits = 1;
    std::vector<Point> rows;
};

std::pair<JoinSchema, DomainEncoding> build_encoding(const std::vector<RawTable>& tables);
Relation encode_relation(const RawTable& table, const JoinSchema& schema, const DomainEncoding& encoding);

// Smallest power of two >= max(distinct, 2), as a bit count.
int bits_for_distinct(std::size_t distinct);

}  // namespace welltris
