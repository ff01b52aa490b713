#include "welltris/gap_box_index.hpp"

#include <numeric>
#include <sstream>

#include "welltris/gapbox.hpp"

namespace welltris {

GapBoxIndex::GapBoxIndex(std::size_t global_dims, int bits) : dims_(global_dims), bits_(bits) {
    if (bits < 1 || bits > kMaxBits) throw SchemaError("bit length out of range");
}

std::size_t GapBoxIndex::add_table(std::string name, std::vector<std::size_t> attrs) {
    for (std::size_t i = 0; i < attrs.size(); ++i) {
        if (attrs[i] >= dims_) throw SchemaError("table '" + name + "' attribute outside global schema");
        if (i > 0 && attrs[i - 1] >= attrs[i]) throw SchemaError("table '" + name + "' attrs not increasing");
    }
    TableSchema ts;
    ts.name = std::move(name);
    ts.attrs = std::move(attrs);
    tries_.emplace_back(ts.dims(), bits_);
    tables_.push_back(std::move(ts));
    return tables_.size() - 1;
}

std::size_t GapBoxIndex::box_count() const {
    return std::accumulate(tries_.begin(), tries_.end(), std::size_t{0},
                           [](std::size_t acc, const DyadicTrie& t) { return acc + t.size(); });
}

bool GapBoxIndex::insert(std::size_t table, const DyadicBox& local) { return tries_.at(table).insert(local); }

bool GapBoxIndex::contains(std::size_t table, const DyadicBox& local) const {
    return tries_.at(table).contains(local);
}

std::vector<CoveringBox> GapBoxIndex::covering_boxes(const Point& global) const {
    if (global.size() != dims_) throw SchemaError("point does not match index dimensionality");
    std::vector<CoveringBox> out;
    for (std::size_t t = 0; t < tables_.size(); ++t) {
        tries_[t].visit_covering(project(global, tables_[t]), [&](const DyadicBox& b) {
            out.push_back(CoveringBox{t, b});
            return true;
        });
    }
    return out;
}

bool GapBoxIndex::covers(const Point& global) const {
    if (global.size() != dims_) throw SchemaError("point does not match index dimensionality");
    for (std::size_t t = 0; t < tables_.size(); ++t)
        if (tries_[t].covers(project(global, tables_[t]))) return true;
    return false;
}

void GapBoxIndex::write(std::ostream& out) const {
    out << "welltris-index v1 d=" << dims_ << " L=" << bits_ << '\n';
    for (std::size_t t = 0; t < tables_.size(); ++t) {
        out << "table " << tables_[t].name << " attrs=";
        for (std::size_t i = 0; i < tables_[t].attrs.size(); ++i) out << (i ? "," : "") << tables_[t].attrs[i];
        out << '\n';
        for (const auto& b : tries_[t].boxes()) out << serialize(b, kLambdaAscii) << '\n';
    }
}

namespace {

std::size_t parse_count(const std::string& s, const std::string& what) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
        throw IndexFormatError("bad " + what + ": '" + s + "'");
    return std::stoull(s);
}

}  // namespace

GapBoxIndex GapBoxIndex::read(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw IndexFormatError("index file is empty");
    std::istringstream header(line);
    std::string magic, version, dfield, lfield, extra;
    header >> magic >> version >> dfield >> lfield;
    if (magic != "welltris-index" || version != "v1" || dfield.rfind("d=", 0) != 0 || lfield.rfind("L=", 0) != 0 ||
        (header >> extra))
        throw IndexFormatError("bad index header: '" + line + "'");
    const std::size_t d = parse_count(dfield.substr(2), "dimension count");
    const std::size_t bits = parse_count(lfield.substr(2), "bit length");
    if (bits < 1 || bits > static_cast<std::size_t>(kMaxBits)) throw IndexFormatError("bit length out of range");

    GapBoxIndex idx(d, static_cast<int>(bits));
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        try {
            if (line.rfind("table ", 0) == 0) {
                std::istringstream ts(line.substr(6));
                std::string name, attrs_field;
                ts >> name >> attrs_field;
                if (name.empty() || attrs_field.rfind("attrs=", 0) != 0 || (ts >> extra))
                    throw IndexFormatError("bad table line");
                std::vector<std::size_t> attrs;
                std::istringstream as(attrs_field.substr(6));
                std::string a;
                while (std::getline(as, a, ',')) attrs.push_back(parse_count(a, "attribute index"));
                if (attrs.empty()) throw IndexFormatError("table without attributes");
                idx.add_table(std::move(name), std::move(attrs));
            } else {
                if (idx.tables_.empty()) throw IndexFormatError("box before any table line");
                const std::size_t t = idx.tables_.size() - 1;
                const DyadicBox b = parse_box(line, idx.bits_);
                if (b.dims() != idx.tables_[t].dims()) throw IndexFormatError("box arity does not match table");
                idx.insert(t, b);
            }
        } catch (const IndexFormatError& e) {
            throw IndexFormatError("line " + std::to_string(lineno) + ": " + e.what());
        } catch (const SchemaError& e) {
            throw IndexFormatError("line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return idx;
}

GapBoxIndex build_index(const JoinSchema& schema, const std::vector<Relation>& relations) {
    GapBoxIndex idx(schema.dims(), schema.bits());
    for (const auto& r : relations) {
        if (r.bits != schema.bits()) throw SchemaError("relation bit length differs from schema");
        const std::size_t t = idx.add_table(r.schema.name, r.schema.attrs);
        for (const auto& b : construct_gap_boxes(r)) idx.insert(t, b);
    }
    return idx;
}

}  // namespace welltris
