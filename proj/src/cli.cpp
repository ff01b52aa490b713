#include "welltris/cli.hpp"

#include <chrono>
#include <fstream>
#include <limits>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "welltris/gap_box_index.hpp"
#include "welltris/ingest.hpp"
#include "welltris/oracle.hpp"

namespace welltris::cli {

namespace {

using nlohmann::json;

json volume_json(Volume v) {
    if (v <= std::numeric_limits<std::uint64_t>::max()) return json(static_cast<std::uint64_t>(v));
    return json(to_string(v));
}

struct Loaded {
    JoinSchema schema;
    DomainEncoding encoding;
    std::vector<Relation> relations;
};

Loaded load_tables(const std::vector<std::filesystem::path>& csvs) {
    std::vector<RawTable> raw;
    for (const auto& p : csvs) raw.push_back(read_csv(p));
    for (std::size_t i = 0; i < raw.size(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (raw[i].name == raw[j].name) throw IngestError("two input files share the table name '" + raw[i].name + "'");
    auto [schema, encoding] = build_encoding(raw);
    Loaded out{std::move(schema), std::move(encoding), {}};
    for (const auto& t : raw) out.relations.push_back(encode_relation(t, out.schema, out.encoding));
    return out;
}

GapBoxIndex load_index(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IndexFormatError("cannot open index '" + path.string() + "'");
    return GapBoxIndex::read(in);
}

DomainEncoding load_encoding(const std::filesystem::path& index) {
    const auto path = encoding_path(index);
    std::ifstream in(path);
    if (!in) throw IngestError("cannot open encoding '" + path.string() + "'");
    return DomainEncoding::read(in);
}

}  // namespace

std::filesystem::path encoding_path(const std::filesystem::path& index) {
    return std::filesystem::path(index.string() + ".enc");
}

int cmd_preprocess(const std::vector<std::filesystem::path>& csvs, const std::filesystem::path& index_out,
                   std::ostream& err) {
    try {
        if (csvs.empty()) throw IngestError("no input tables");
        const Loaded data = load_tables(csvs);
        const GapBoxIndex idx = build_index(data.schema, data.relations);
        std::ofstream out(index_out, std::ios::binary);
        if (!out) throw IngestError("cannot write '" + index_out.string() + "'");
        idx.write(out);
        std::ofstream enc(encoding_path(index_out), std::ios::binary);
        if (!enc) throw IngestError("cannot write '" + encoding_path(index_out).string() + "'");
        data.encoding.write(enc);
        if (!out || !enc) throw IngestError("write failed");
        return kOk;
    } catch (const std::exception& e) {
        err << "preprocess: " << e.what() << '\n';
        return kInputError;
    }
}

std::string estimate_json(const Estimate& est, double wall_ms) {
    json j;
    j["estimate"] = volume_json(est.value);
    j["epsilon"] = est.epsilon;
    j["delta"] = est.delta;
    j["seed"] = est.seed;
    j["iterations"] = est.iterations;
    j["boxes_in_E"] = est.boxes_in_e;
    j["samples_drawn"] = est.samples_drawn;
    j["k_used"] = est.k_used;
    j["wall_ms"] = wall_ms;
    return j.dump();
}

int cmd_estimate(const EstimateOptions& opts, std::ostream& out, std::ostream& err) {
    GapBoxIndex idx(1, 1);
    try {
        idx = load_index(opts.index);
    } catch (const std::exception& e) {
        err << "estimate: " << e.what() << '\n';
        return kInputError;
    }
    EstimatorConfig cfg{opts.epsilon, opts.delta, opts.seed, opts.k};
    try {
        cfg.validate();
    } catch (const std::exception& e) {
        err << "estimate: " << e.what() << '\n';
        return kInputError;
    }
    const auto start = std::chrono::steady_clock::now();
    const Estimate est = estimate_join_size(idx, cfg);
    const double wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    out << estimate_json(est, wall_ms) << '\n';
    return kOk;
}

int cmd_sample(const std::filesystem::path& index, std::size_t q, std::uint64_t seed, std::ostream& out,
               std::ostream& err) {
    GapBoxIndex idx(1, 1);
    DomainEncoding enc;
    try {
        idx = load_index(index);
        enc = load_encoding(index);
        if (enc.attributes().size() != idx.dims() || enc.bits() != idx.bits())
            throw IngestError("encoding file does not match index");
    } catch (const std::exception& e) {
        err << "sample: " << e.what() << '\n';
        return kInputError;
    }
    EstimatorConfig cfg;
    cfg.seed = seed;
    std::vector<Point> rows;
    try {
        rows = sample_join_rows(idx, q, cfg);
    } catch (const EmptyJoinError& e) {
        err << "sample: " << e.what() << '\n';
        return kEmptyJoin;
    }
    for (std::size_t a = 0; a < enc.attributes().size(); ++a) out << (a ? "," : "") << enc.attributes()[a];
    out << '\n';
    try {
        for (const auto& r : rows) {
            for (std::size_t a = 0; a < r.size(); ++a) out << (a ? "," : "") << enc.decode(a, r[a]);
            out << '\n';
        }
    } catch (const IngestError& e) {
        err << "sample: " << e.what() << '\n';
        return kInputError;
    }
    return kOk;
}

int cmd_exact(const std::vector<std::filesystem::path>& csvs, bool rows, std::size_t max_rows, std::ostream& out,
              std::ostream& err) {
    Loaded data;
    try {
        if (csvs.empty()) throw IngestError("no input tables");
        data = load_tables(csvs);
    } catch (const std::exception& e) {
        err << "exact: " << e.what() << '\n';
        return kInputError;
    }
    oracle::JoinResult join;
    try {
        join = oracle::exact_join(data.schema, data.relations, max_rows);
    } catch (const oracle::OracleGuardError& e) {
        err << "exact: " << e.what() << '\n';
        return kOracleGuard;
    }
    json j;
    j["z"] = join.size();
    if (rows) {
        j["attributes"] = data.schema.attributes();
        json list = json::array();
        for (const auto& r : join.rows) {
            json row = json::array();
            for (std::size_t a = 0; a < r.size(); ++a) row.push_back(data.encoding.decode(a, r[a]));
            list.push_back(std::move(row));
        }
        j["rows"] = std::move(list);
    }
    out << j.dump() << '\n';
    return kOk;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Join size estimation and join-row sampling over dyadic gap box indexes"};
    app.require_subcommand(1);

    std::vector<std::string> pre_csvs;
    std::string pre_out;
    auto* pre = app.add_subcommand("preprocess", "Build a gap box index from CSV tables");
    pre->add_option("csv", pre_csvs, "Input CSV files")->required()->check(CLI::ExistingFile);
    pre->add_option("-o,--out", pre_out, "Index file to write")->required();

    EstimateOptions est;
    std::string est_index;
    std::size_t est_k = 0;
    auto* estc = app.add_subcommand("estimate", "Estimate the join size");
    estc->add_option("index", est_index, "Index file")->required();
    estc->add_option("--epsilon", est.epsilon, "Relative error")->capture_default_str();
    estc->add_option("--delta", est.delta, "Failure probability")->capture_default_str();
    estc->add_option("--seed", est.seed, "RNG seed")->capture_default_str();
    auto* kopt = estc->add_option("--k", est_k, "Fixed number of samples per iteration");

    std::string smp_index;
    std::size_t smp_q = 0;
    std::uint64_t smp_seed = 0;
    auto* smp = app.add_subcommand("sample", "Draw uniform rows of the join");
    smp->add_option("index", smp_index, "Index file")->required();
    smp->add_option("--q", smp_q, "Number of rows")->required();
    smp->add_option("--seed", smp_seed, "RNG seed")->capture_default_str();

    std::vector<std::string> ex_csvs;
    bool ex_rows = false;
    std::size_t ex_max = oracle::kMaxJoinRows;
    auto* ex = app.add_subcommand("exact", "Exact join size by hash join");
    ex->add_option("csv", ex_csvs, "Input CSV files")->required();
    ex->add_flag("--rows", ex_rows, "Also print the decoded join rows");
    ex->add_option("--max-rows", ex_max, "Guard on intermediate join size")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        // Missing input files arrive here via the ExistingFile check.
        err << e.what() << '\n';
        return kInputError;
    }

    auto to_paths = [](const std::vector<std::string>& v) {
        return std::vector<std::filesystem::path>(v.begin(), v.end());
    };
    if (*pre) return cmd_preprocess(to_paths(pre_csvs), pre_out, err);
    if (*estc) {
        est.index = est_index;
        if (*kopt) est.k = est_k;
        return cmd_estimate(est, out, err);
    }
    if (*smp) return cmd_sample(smp_index, smp_q, smp_seed, out, err);
    if (*ex) return cmd_exact(to_paths(ex_csvs), ex_rows, ex_max, out, err);
    return kInputError;
}

}  // namespace welltris::cli
