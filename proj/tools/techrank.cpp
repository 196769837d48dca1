// techrank: method-of-reflections ranking of bipartite company-technology
// graphs. Subcommands: rank, compare, sweep, gen, filter.
//
// Exit codes: 0 ok/converged, 1 input error, 2 empty or degenerate graph,
// 3 iteration cap hit, 4 insufficient ranking overlap.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "techrank/csv.hpp"
#include "techrank/engine.hpp"
#include "techrank/errors.hpp"
#include "techrank/ingest.hpp"
#include "techrank/metrics.hpp"
#include "techrank/synth.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitDegenerate = 2;
constexpr int kExitMaxIterations = 3;
constexpr int kExitInsufficientOverlap = 4;

struct GlobalOptions {
    bool json = false;
    bool quiet = false;
};

void warn(const GlobalOptions& global, const std::string& message) {
    if (!global.quiet) std::cerr << "warning: " << message << "\n";
}

const char* status_string(techrank::RunStatus status) {
    switch (status) {
        case techrank::RunStatus::Converged: return "converged";
        case techrank::RunStatus::MaxIterations: return "max_iterations";
        case techrank::RunStatus::Failed: return "failed";
    }
    return "unknown";
}

// "start:stop:step" inclusive of stop (within half a step), or one value
std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> parts;
    std::size_t begin = 0;
    while (true) {
        std::size_t colon = text.find(':', begin);
        std::string piece = text.substr(begin, colon == std::string::npos
                                                   ? std::string::npos
                                                   : colon - begin);
        try {
            std::size_t used = 0;
            double value = std::stod(piece, &used);
            if (used != piece.size()) throw std::invalid_argument(piece);
            parts.push_back(value);
        } catch (const std::exception&) {
            throw techrank::Error("invalid grid component '" + piece + "'");
        }
        if (colon == std::string::npos) break;
        begin = colon + 1;
    }
    if (parts.size() == 1) return parts;
    if (parts.size() != 3) {
        throw techrank::Error("grid must be a single value or start:stop:step");
    }
    double start = parts[0], stop = parts[1], step = parts[2];
    if (start == stop) return {start};
    if (step <= 0.0 || stop < start) {
        throw techrank::Error("grid requires stop >= start and step > 0");
    }
    std::vector<double> values;
    for (std::size_t i = 0;; ++i) {
        double value = start + static_cast<double>(i) * step;
        if (value > stop + step * 1e-9) break;
        values.push_back(value);
    }
    return values;
}

std::ofstream open_output(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw techrank::IoError("cannot write file: " + path.string());
    return out;
}

techrank::Ranking layer_ranking(std::span<const std::string> labels,
                                std::span<const double> weights) {
    std::vector<std::pair<std::string, double>> pairs;
    pairs.reserve(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) pairs.emplace_back(labels[i], weights[i]);
    return techrank::weights_to_ranking(std::move(pairs));
}

void write_ranking_csv(const fs::path& path, const techrank::Ranking& ranking) {
    auto out = open_output(path);
    out << "entity,weight,rank\n";
    for (const techrank::RankedEntity& entry : ranking.entries) {
        out << techrank::csv::escape(entry.label) << ','
            << techrank::csv::format_double(entry.weight) << ','
            << techrank::csv::format_double(entry.rank) << '\n';
    }
}

ordered_json ranking_json(const techrank::Ranking& ranking) {
    ordered_json rows = ordered_json::array();
    for (const techrank::RankedEntity& entry : ranking.entries) {
        rows.push_back({{"entity", entry.label}, {"weight", entry.weight}, {"rank", entry.rank}});
    }
    return rows;
}

struct RankArgs {
    std::string edges_path;
    double alpha = 0.0;
    double beta = 0.0;
    double tolerance = 1e-9;
    std::size_t window = 10;
    std::size_t max_iterations = 10000;
    std::string out_dir = ".";
    bool trace = false;
    std::string format = "auto";
};

techrank::EdgeLoadResult load_edge_file(const std::string& path, const std::string& format) {
    techrank::EdgeFormat f = format == "csv"     ? techrank::EdgeFormat::Csv
                             : format == "jsonl" ? techrank::EdgeFormat::Jsonl
                                                 : techrank::detect_edge_format(path);
    return techrank::load_edges(path, f);
}

// loads, prunes and reports; shared by rank and sweep
struct PreparedGraph {
    techrank::BipartiteGraph graph;
    std::size_t duplicate_edges;
    std::size_t pruned_nodes;
};

PreparedGraph prepare_graph(const std::string& path, const std::string& format,
                            const GlobalOptions& global) {
    auto loaded = load_edge_file(path, format);
    if (loaded.extra_field_rows > 0) {
        warn(global, std::to_string(loaded.extra_field_rows) +
                         " row(s) carried extra columns that were ignored");
    }
    auto built = techrank::graph_from_records(loaded.records);
    if (built.duplicate_edges > 0) {
        warn(global, std::to_string(built.duplicate_edges) + " duplicate edge(s) collapsed");
    }
    auto pruned = techrank::prune(built.graph);
    if (!pruned.removed.empty()) {
        warn(global, std::to_string(pruned.removed.size()) + " degree-0 node(s) pruned");
    }
    return {std::move(pruned.graph), built.duplicate_edges, pruned.removed.size()};
}

int cmd_rank(const RankArgs& args, const GlobalOptions& global) {
    PreparedGraph prepared = prepare_graph(args.edges_path, args.format, global);

    techrank::RunConfig cfg;
    cfg.exponents = {args.alpha, args.beta};
    cfg.tolerance = args.tolerance;
    cfg.rank_stability_window = args.window;
    cfg.max_iterations = args.max_iterations;
    techrank::RunResult run = techrank::run_to_convergence(prepared.graph, cfg);

    techrank::Ranking companies =
        layer_ranking(prepared.graph.company_labels(), run.state.company_weights);
    techrank::Ranking technologies =
        layer_ranking(prepared.graph.technology_labels(), run.state.technology_weights);

    fs::path out_dir(args.out_dir);
    fs::create_directories(out_dir);
    write_ranking_csv(out_dir / "companies.csv", companies);
    write_ranking_csv(out_dir / "technologies.csv", technologies);
    if (args.trace) {
        auto out = open_output(out_dir / "trace.csv");
        out << "iteration,delta_c,delta_t\n";
        for (const techrank::TraceRow& row : run.trace) {
            out << row.iteration << ',' << techrank::csv::format_double(row.delta_companies)
                << ',' << techrank::csv::format_double(row.delta_technologies) << '\n';
        }
    }

    ordered_json report;
    report["alpha"] = cfg.exponents.alpha;
    report["beta"] = cfg.exponents.beta;
    report["tolerance"] = cfg.tolerance;
    report["rank_stability_window"] = cfg.rank_stability_window;
    report["max_iterations"] = cfg.max_iterations;
    report["status"] = status_string(run.status);
    report["iterations"] = run.state.iteration;
    report["n_companies"] = prepared.graph.company_count();
    report["n_technologies"] = prepared.graph.technology_count();
    report["n_edges"] = prepared.graph.edge_count();
    report["pruned_nodes"] = prepared.pruned_nodes;
    report["duplicate_edges"] = prepared.duplicate_edges;
    report["companies"] = ranking_json(companies);
    report["technologies"] = ranking_json(technologies);
    {
        auto out = open_output(out_dir / "report.json");
        out << report.dump(2) << '\n';
    }

    if (global.json) {
        ordered_json summary = report;
        summary.erase("companies");
        summary.erase("technologies");
        summary["out_dir"] = out_dir.string();
        std::cout << summary.dump() << "\n";
    } else if (!global.quiet) {
        std::cout << "status: " << status_string(run.status) << "\n"
                  << "iterations: " << run.state.iteration << "\n"
                  << "companies: " << prepared.graph.company_count()
                  << " technologies: " << prepared.graph.technology_count()
                  << " pruned: " << prepared.pruned_nodes << "\n"
                  << "report: " << (out_dir / "report.json").string() << "\n";
    }
    return run.status == techrank::RunStatus::Converged ? kExitOk : kExitMaxIterations;
}

struct CompareArgs {
    std::string ranking_path;
    std::string baseline_path;
};

int cmd_compare(const CompareArgs& args, const GlobalOptions& global) {
    auto ranking = techrank::load_rank_column(args.ranking_path);
    auto baseline = techrank::load_rank_column(args.baseline_path);
    techrank::Correlation correlation = techrank::spearman_ranks(ranking, baseline);

    if (global.json) {
        ordered_json output;
        output["rho"] = correlation.rho;
        output["n_common"] = correlation.n_common;
        output["only_in_ranking"] = correlation.only_in_first;
        output["only_in_baseline"] = correlation.only_in_second;
        std::cout << output.dump() << "\n";
    } else {
        char rho_display[32];
        std::snprintf(rho_display, sizeof(rho_display), "%.3f", correlation.rho);
        std::cout << "rho: " << rho_display << "\n"
                  << "n_common: " << correlation.n_common << "\n"
                  << "only_in_ranking: " << correlation.only_in_first << "\n"
                  << "only_in_baseline: " << correlation.only_in_second << "\n";
    }
    return kExitOk;
}

struct SweepArgs {
    std::string edges_path;
    std::string alpha_grid;
    std::string beta_grid;
    double tolerance = 1e-9;
    std::size_t window = 10;
    std::size_t max_iterations = 10000;
    std::string out_path;  // empty: stdout
    std::string format = "auto";
};

int cmd_sweep(const SweepArgs& args, const GlobalOptions& global) {
    std::vector<double> alphas = parse_grid(args.alpha_grid);
    std::vector<double> betas = parse_grid(args.beta_grid);
    PreparedGraph prepared = prepare_graph(args.edges_path, args.format, global);

    techrank::RunConfig cfg;
    cfg.tolerance = args.tolerance;
    cfg.rank_stability_window = args.window;
    cfg.max_iterations = args.max_iterations;
    std::vector<techrank::SweepCell> cells =
        techrank::sweep(prepared.graph, alphas, betas, cfg);

    std::size_t succeeded = 0;
    ordered_json json_cells = ordered_json::array();
    std::string body = "alpha,beta,status,iterations,top_company,top_technology\n";
    for (const techrank::SweepCell& cell : cells) {
        std::string top_company;
        std::string top_technology;
        if (cell.status != techrank::RunStatus::Failed) {
            ++succeeded;
            top_company = layer_ranking(prepared.graph.company_labels(),
                                        cell.state.company_weights)
                              .entries.front()
                              .label;
            top_technology = layer_ranking(prepared.graph.technology_labels(),
                                           cell.state.technology_weights)
                                 .entries.front()
                                 .label;
        }
        body += techrank::csv::format_double(cell.alpha);
        body += ',';
        body += techrank::csv::format_double(cell.beta);
        body += ',';
        body += status_string(cell.status);
        body += ',';
        body += std::to_string(cell.iterations);
        body += ',';
        body += techrank::csv::escape(top_company);
        body += ',';
        body += techrank::csv::escape(top_technology);
        body += '\n';
        if (global.json) {
            json_cells.push_back({{"alpha", cell.alpha},
                                  {"beta", cell.beta},
                                  {"status", status_string(cell.status)},
                                  {"iterations", cell.iterations},
                                  {"top_company", top_company},
                                  {"top_technology", top_technology}});
        }
    }

    if (!args.out_path.empty()) {
        auto out = open_output(args.out_path);
        out << body;
        if (global.json) std::cout << json_cells.dump() << "\n";
    } else if (global.json) {
        std::cout << json_cells.dump() << "\n";
    } else {
        std::cout << body;
    }
    if (succeeded == 0) {
        if (!global.quiet) std::cerr << "error: every sweep cell failed\n";
        return kExitInputError;
    }
    return kExitOk;
}

struct GenArgs {
    std::uint32_t companies = 0;
    std::uint32_t technologies = 0;
    std::uint64_t seed = 0;
    std::string model = "uniform";
    double probability = 0.5;
    std::uint32_t degree = 1;
    std::vector<std::string> blocks;
    std::string out_path;  // empty: stdout
};

techrank::BlockSpec parse_block(const std::string& text) {
    std::vector<std::string> parts;
    std::size_t begin = 0;
    while (true) {
        std::size_t colon = text.find(':', begin);
        parts.push_back(text.substr(
            begin, colon == std::string::npos ? std::string::npos : colon - begin));
        if (colon == std::string::npos) break;
        begin = colon + 1;
    }
    if (parts.size() != 6) {
        throw techrank::Error("block must be c0:c1:t0:t1:p_in:p_out");
    }
    try {
        techrank::BlockSpec block;
        block.company_begin = static_cast<std::uint32_t>(std::stoul(parts[0]));
        block.company_end = static_cast<std::uint32_t>(std::stoul(parts[1]));
        block.tech_begin = static_cast<std::uint32_t>(std::stoul(parts[2]));
        block.tech_end = static_cast<std::uint32_t>(std::stoul(parts[3]));
        block.p_in = std::stod(parts[4]);
        block.p_out = std::stod(parts[5]);
        return block;
    } catch (const std::exception&) {
        throw techrank::Error("invalid block '" + text + "'");
    }
}

int cmd_gen(const GenArgs& args, const GlobalOptions& global) {
    techrank::GenSpec spec;
    spec.n_companies = args.companies;
    spec.n_technologies = args.technologies;
    spec.seed = args.seed;
    if (args.model == "uniform") {
        spec.model = techrank::UniformRandomModel{args.probability};
    } else if (args.model == "fixed-degree") {
        spec.model = techrank::FixedDegreeModel{args.degree};
    } else if (args.model == "planted") {
        techrank::PlantedBlocksModel model;
        for (const std::string& text : args.blocks) model.blocks.push_back(parse_block(text));
        if (model.blocks.empty()) {
            throw techrank::Error("planted model needs at least one --block");
        }
        spec.model = std::move(model);
    } else {
        throw techrank::Error("unknown model '" + args.model + "'");
    }

    techrank::BipartiteGraph graph = techrank::generate(spec);
    if (graph.edge_count() == 0) warn(global, "generated graph has no edges");

    if (global.json && args.out_path.empty()) {
        throw techrank::Error("--json for gen requires --out so the CSV has a destination");
    }
    if (!args.out_path.empty()) {
        auto out = open_output(args.out_path);
        techrank::write_edges_csv(graph, out);
    } else {
        techrank::write_edges_csv(graph, std::cout);
    }
    if (global.json) {
        ordered_json summary;
        summary["out"] = args.out_path;
        summary["n_companies"] = graph.company_count();
        summary["n_technologies"] = graph.technology_count();
        summary["n_edges"] = graph.edge_count();
        summary["seed"] = args.seed;
        std::cout << summary.dump() << "\n";
    }
    return kExitOk;
}

struct FilterArgs {
    std::string docs_path;
    std::string keywords_path;
    std::size_t min_hits = 2;
    bool case_sensitive = false;
};

std::set<std::string> load_keywords(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw techrank::IoError("cannot open file: " + path.string());
    std::set<std::string> keywords;
    std::string line;
    while (std::getline(in, line)) {
        std::string keyword = techrank::csv::trim(line);
        if (!keyword.empty()) keywords.insert(std::move(keyword));
    }
    if (keywords.empty()) {
        throw techrank::Error("keyword file contains no keywords: " + path.string());
    }
    return keywords;
}

int cmd_filter(const FilterArgs& args, const GlobalOptions& global) {
    std::vector<techrank::CompanyDoc> docs = techrank::load_docs(args.docs_path);
    std::set<std::string> keywords = load_keywords(args.keywords_path);
    techrank::KeywordFilterOptions options;
    options.min_hits = args.min_hits;
    options.case_sensitive = args.case_sensitive;
    std::set<std::string> selected = techrank::keyword_filter(docs, keywords, options);

    if (global.json) {
        ordered_json labels = ordered_json::array();
        for (const std::string& label : selected) labels.push_back(label);
        std::cout << labels.dump() << "\n";
    } else {
        for (const std::string& label : selected) std::cout << label << "\n";
    }
    if (!global.quiet) {
        std::cerr << "selected " << selected.size() << " of " << docs.size()
                  << " companies\n";
    }
    return kExitOk;
}

int dispatch(int argc, char** argv) {
    CLI::App app{"method-of-reflections ranking for bipartite company-technology graphs"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions global;
    app.add_flag("--json", global.json, "machine-readable stdout");
    app.add_flag("--quiet", global.quiet, "suppress progress and warnings");

    RankArgs rank_args;
    CLI::App* rank = app.add_subcommand("rank", "rank companies and technologies");
    rank->add_option("edges", rank_args.edges_path, "edge list file")->required();
    rank->add_option("--alpha,-a", rank_args.alpha, "technology-degree exponent");
    rank->add_option("--beta,-b", rank_args.beta, "company-degree exponent");
    rank->add_option("--tol", rank_args.tolerance, "weight-delta tolerance");
    rank->add_option("--window", rank_args.window, "rank stability window");
    rank->add_option("--max-iter", rank_args.max_iterations, "iteration cap");
    rank->add_option("--out", rank_args.out_dir, "output directory");
    rank->add_flag("--trace", rank_args.trace, "write per-iteration trace.csv");
    rank->add_option("--format", rank_args.format, "edge file format")
        ->check(CLI::IsMember({"auto", "csv", "jsonl"}));

    CompareArgs compare_args;
    CLI::App* compare = app.add_subcommand("compare", "Spearman rho of two rankings");
    compare->add_option("ranking", compare_args.ranking_path, "ranking CSV")->required();
    compare->add_option("baseline", compare_args.baseline_path, "baseline CSV")->required();

    SweepArgs sweep_args;
    CLI::App* sweep = app.add_subcommand("sweep", "rank over an exponent grid");
    sweep->add_option("edges", sweep_args.edges_path, "edge list file")->required();
    sweep->add_option("--alpha-grid", sweep_args.alpha_grid, "alpha grid start:stop:step")
        ->required();
    sweep->add_option("--beta-grid", sweep_args.beta_grid, "beta grid start:stop:step")
        ->required();
    sweep->add_option("--tol", sweep_args.tolerance, "weight-delta tolerance");
    sweep->add_option("--window", sweep_args.window, "rank stability window");
    sweep->add_option("--max-iter", sweep_args.max_iterations, "iteration cap");
    sweep->add_option("--out", sweep_args.out_path, "sweep CSV path (default stdout)");
    sweep->add_option("--format", sweep_args.format, "edge file format")
        ->check(CLI::IsMember({"auto", "csv", "jsonl"}));

    GenArgs gen_args;
    CLI::App* gen = app.add_subcommand("gen", "generate a seeded random edge list");
    gen->add_option("--companies,-c", gen_args.companies, "company count")->required();
    gen->add_option("--technologies,-t", gen_args.technologies, "technology count")
        ->required();
    gen->add_option("--seed", gen_args.seed, "RNG seed");
    gen->add_option("--model", gen_args.model, "uniform | fixed-degree | planted")
        ->check(CLI::IsMember({"uniform", "fixed-degree", "planted"}));
    gen->add_option("--p", gen_args.probability, "edge probability (uniform)");
    gen->add_option("--degree", gen_args.degree, "edges per company (fixed-degree)");
    gen->add_option("--block", gen_args.blocks,
                    "planted block c0:c1:t0:t1:p_in:p_out (repeatable)");
    gen->add_option("--out", gen_args.out_path, "edge CSV path (default stdout)");

    FilterArgs filter_args;
    CLI::App* filter = app.add_subcommand("filter", "keyword-filter company docs");
    filter->add_option("docs", filter_args.docs_path, "company docs JSONL")->required();
    filter->add_option("keywords", filter_args.keywords_path, "keyword list, one per line")
        ->required();
    filter->add_option("--min-hits", filter_args.min_hits, "distinct keywords required")
        ->check(CLI::PositiveNumber);
    filter->add_flag("--case-sensitive", filter_args.case_sensitive,
                     "match keywords case-sensitively");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInputError;
    }

    if (app.got_subcommand(rank)) return cmd_rank(rank_args, global);
    if (app.got_subcommand(compare)) return cmd_compare(compare_args, global);
    if (app.got_subcommand(sweep)) return cmd_sweep(sweep_args, global);
    if (app.got_subcommand(gen)) return cmd_gen(gen_args, global);
    if (app.got_subcommand(filter)) return cmd_filter(filter_args, global);
    return kExitInputError;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const techrank::InsufficientOverlapError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInsufficientOverlap;
    } catch (const techrank::ZeroVarianceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDegenerate;
    } catch (const techrank::EmptyLayerError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDegenerate;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
}
