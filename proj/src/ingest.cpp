#include "welltris/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

namespace welltris {

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

void strip_cr(std::string& line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
}

}  // namespace

RawTable parse_csv(std::istream& in, std::string name) {
    RawTable t;
    t.name = std::move(name);
    std::string line;
    if (!std::getline(in, line)) throw IngestError("table '" + t.name + "': missing header");
    strip_cr(line);
    t.header = split_line(line);
    if (t.header.empty() || std::all_of(t.header.begin(), t.header.end(), [](auto& h) { return h.empty(); }))
        throw IngestError("table '" + t.name + "': empty header");
    std::set<std::string> seen;
    for (const auto& h : t.header) {
        if (h.empty()) throw IngestError("table '" + t.name + "': empty column name");
        if (!seen.insert(h).second) throw IngestError("table '" + t.name + "': duplicate column '" + h + "'");
    }
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        strip_cr(line);
        if (line.empty()) continue;
        auto fields = split_line(line);
        if (fields.size() != t.header.size())
            throw IngestError("table '" + t.name + "' line " + std::to_string(lineno) + ": expected " +
                              std::to_string(t.header.size()) + " fields, got " + std::to_string(fields.size()));
        t.rows.push_back(std::move(fields));
    }
    return t;
}

RawTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IngestError("cannot open '" + path.string() + "'");
    return parse_csv(in, path.stem().string());
}

DomainEncoding::DomainEncoding(std::vector<std::string> attributes, int bits)
    : attributes_(std::move(attributes)), values_(attributes_.size()), codes_(attributes_.size()), bits_(bits) {
    for (std::size_t i = 0; i < attributes_.size(); ++i) attr_index_.emplace(attributes_[i], i);
}

std::size_t DomainEncoding::attribute_index(const std::string& name) const {
    auto it = attr_index_.find(name);
    if (it == attr_index_.end()) throw IngestError("unknown attribute '" + name + "'");
    return it->second;
}

Coord DomainEncoding::intern(std::size_t attr, const std::string& value) {
    auto [it, inserted] = codes_.at(attr).emplace(value, values_[attr].size());
    if (inserted) values_[attr].push_back(value);
    return it->second;
}

Coord DomainEncoding::encode(std::size_t attr, const std::string& value) const {
    const auto& m = codes_.at(attr);
    auto it = m.find(value);
    if (it == m.end())
        throw IngestError("value '" + value + "' of attribute '" + attributes_[attr] + "' is not in the encoding");
    return it->second;
}

const std::string& DomainEncoding::decode(std::size_t attr, Coord code) const {
    const auto& v = values_.at(attr);
    if (code >= v.size())
        throw IngestError("code " + std::to_string(code) + " of attribute '" + attributes_[attr] +
                          "' has no value");
    return v[code];
}

void DomainEncoding::write(std::ostream& out) const {
    out << "welltris-encoding v1 L=" << bits_ << '\n';
    for (std::size_t a = 0; a < attributes_.size(); ++a) {
        out << attributes_[a];
        for (const auto& v : values_[a]) out << ',' << v;
        out << '\n';
    }
}

DomainEncoding DomainEncoding::read(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw IngestError("encoding file is empty");
    strip_cr(line);
    const std::string magic = "welltris-encoding v1 L=";
    if (line.rfind(magic, 0) != 0) throw IngestError("bad encoding header");
    int bits = 0;
    try {
        bits = std::stoi(line.substr(magic.size()));
    } catch (const std::exception&) {
        throw IngestError("bad encoding header");
    }
    std::vector<std::string> names;
    std::vector<std::vector<std::string>> values;
    while (std::getline(in, line)) {
        strip_cr(line);
        if (line.empty()) continue;
        auto fields = split_line(line);
        names.push_back(fields.front());
        values.emplace_back(fields.begin() + 1, fields.end());
    }
    DomainEncoding enc(names, bits);
    for (std::size_t a = 0; a < names.size(); ++a)
        for (const auto& v : values[a]) enc.intern(a, v);
    return enc;
}

int bits_for_distinct(std::size_t distinct) {
    int bits = 1;
    while ((std::size_t{1} << bits) < distinct) ++bits;
    return bits;
}

std::pair<JoinSchema, DomainEncoding> build_encoding(const std::vector<RawTable>& tables) {
    std::set<std::string> names;
    for (const auto& t : tables) {
        if (t.header.empty()) throw IngestError("table '" + t.name + "': empty header");
        std::set<std::string> local;
        for (const auto& h : t.header) {
            if (!local.insert(h).second) throw IngestError("table '" + t.name + "': duplicate column '" + h + "'");
            names.insert(h);
        }
    }
    std::vector<std::string> attributes(names.begin(), names.end());
    DomainEncoding enc(attributes, 1);

    std::vector<TableSchema> schemas;
    for (const auto& t : tables) {
        std::vector<std::size_t> cols(t.header.size());
        for (std::size_t c = 0; c < cols.size(); ++c) cols[c] = enc.attribute_index(t.header[c]);
        for (const auto& row : t.rows) {
            if (row.size() != cols.size()) throw IngestError("table '" + t.name + "': ragged row");
            for (std::size_t c = 0; c < cols.size(); ++c) enc.intern(cols[c], row[c]);
        }
        TableSchema ts;
        ts.name = t.name;
        ts.attrs = cols;
        std::sort(ts.attrs.begin(), ts.attrs.end());
        schemas.push_back(std::move(ts));
    }

    std::size_t max_distinct = 0;
    for (std::size_t a = 0; a < attributes.size(); ++a) max_distinct = std::max(max_distinct, enc.distinct(a));
    const int bits = bits_for_distinct(max_distinct);
    if (bits > kMaxBits) throw IngestError("attribute domain too large");
    enc.set_bits(bits);
    return {JoinSchema(std::move(attributes), bits, std::move(schemas)), std::move(enc)};
}

Relation encode_relation(const RawTable& table, const JoinSchema& schema, const DomainEncoding& encoding) {
    const TableSchema* ts = nullptr;
    for (const auto& t : schema.tables())
        if (t.name == table.name) ts = &t;
    if (ts == nullptr) throw IngestError("table '" + table.name + "' is not part of the schema");

    // Column c of the file lands at position slot[c] of the global-ordered row.
    std::vector<std::size_t> slot(table.header.size());
    for (std::size_t c = 0; c < table.header.size(); ++c) {
        const auto attr = encoding.attribute_index(table.header[c]);
        auto it = std::find(ts->attrs.begin(), ts->attrs.end(), attr);
        if (it == ts->attrs.end()) throw IngestError("column '" + table.header[c] + "' not in table schema");
        slot[c] = static_cast<std::size_t>(it - ts->attrs.begin());
    }
    if (table.header.size() != ts->attrs.size()) throw IngestError("table '" + table.name + "' schema mismatch");

    Relation r;
    r.schema = *ts;
    r.bits = schema.bits();
    std::unordered_set<Point, PointHash> seen;
    for (const auto& row : table.rows) {
        Point p(ts->attrs.size());
        for (std::size_t c = 0; c < row.size(); ++c) {
            const Coord code = encoding.encode(ts->attrs[slot[c]], row[c]);
            if (code >= schema.domain()) throw IngestError("code exceeds lattice size");
            p[slot[c]] = code;
        }
        if (seen.insert(p).second) r.rows.push_back(std::move(p));
    }
    r.schema.row_count = r.rows.size();
    return r;
}

}  // namespace welltris
