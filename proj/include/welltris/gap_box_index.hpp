#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "welltris/core.hpp"
#include "welltris/ingest.hpp"
#include "welltris/trie.hpp"

namespace welltris {

class IndexFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A stored gap box that covers a queried global point.
struct CoveringBox {
    std::size_t table = 0;
    DyadicBox local;
};

// Per-table tries of table-local dyadic gap boxes, plus the schema needed to lift
// them into the global attribute space.
class GapBoxIndex {
public:
    GapBoxIndex(std::size_t global_dims, int bits);

    std::size_t add_table(std::string name, std::vector<std::size_t> attrs);

    std::size_t dims() const { return dims_; }
    int bits() const { return bits_; }
    Coord domain() const { return Coord{1} << bits_; }
    const std::vector<TableSchema>& tables() const { return tables_; }

    // Total stored boxes across tables.
    std::size_t box_count() const;
    std::size_t box_count(std::size_t table) const { return tries_.at(table).size(); }

    bool insert(std::size_t table, const DyadicBox& local);
    bool contains(std::size_t table, const DyadicBox& local) const;
    std::vector<DyadicBox> boxes(std::size_t table) const { return tries_.at(table).boxes(); }

    std::vector<CoveringBox> covering_boxes(const Point& global) const;
    bool covers(const Point& global) const;
    DyadicBox lift(const CoveringBox& box) const { return lift_to_global(box.local, tables_[box.table], dims_); }

    // Text format:
    //   welltris-index v1 d=<d> L=<L>
    //   table <name> attrs=<i,j,...>
    //   <box>            one per line, lambda written as '_'
    void write(std::ostream& out) const;
    static GapBoxIndex read(std::istream& in);

private:
    std::size_t dims_;
    int bits_;
    std::vector<TableSchema> tables_;
    std::vector<DyadicTrie> tries_;
};

// Runs gap box construction for every relation and stores the results.
GapBoxIndex build_index(const JoinSchema& schema, const std::vector<Relation>& relations);

}  // namespace welltris
