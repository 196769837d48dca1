#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "techrank/graph.hpp"

namespace techrank {

struct EdgeRecord {
    std::string company;
    std::string technology;
};

enum class EdgeFormat { Csv, Jsonl };

struct EdgeLoadResult {
    std::vector<EdgeRecord> records;
    // CSV rows that carried ignored trailing columns (weights etc.)
    std::size_t extra_field_rows = 0;
};

/// Reads an edge list. CSV: two columns, an exact "company,technology"
/// header row is skipped, further columns are ignored and counted. JSONL:
/// one object per line with string fields "company" and "technology".
/// Fields are whitespace-trimmed and must be non-empty.
EdgeLoadResult load_edges(const std::filesystem::path& path, EdgeFormat format);

// .jsonl / .ndjson extensions select Jsonl, anything else Csv.
EdgeFormat detect_edge_format(const std::filesystem::path& path);

struct BaselineEntry {
    std::string entity;
    std::uint64_t rank;
};

// Externally supplied ranking; ranks are positive and may have gaps.
struct BaselineRanking {
    std::vector<BaselineEntry> entries;
};

/// CSV with columns entity,rank (exact header row optional). Duplicate
/// entities raise DuplicateEntityError.
BaselineRanking load_baseline(const std::filesystem::path& path);

struct CompanyDoc {
    std::string company;
    std::string description;
};

// JSONL objects with string fields "company" and "description".
std::vector<CompanyDoc> load_docs(const std::filesystem::path& path);

struct KeywordFilterOptions {
    std::size_t min_hits = 2;
    bool case_sensitive = false;
};

/// Companies whose description contains at least min_hits DISTINCT keywords
/// as whole words. Word characters are ASCII alphanumerics, '_' and every
/// byte >= 0x80, so UTF-8 sequences never split at a boundary; case folding
/// is ASCII-only. Repeated hits of one keyword count once.
std::set<std::string> keyword_filter(std::span<const CompanyDoc> docs,
                                     const std::set<std::string>& keywords,
                                     const KeywordFilterOptions& options = {});

// Builds the graph with first-appearance node order; duplicates collapse.
BuildResult graph_from_records(std::span<const EdgeRecord> records);

// Canonical edge CSV: header plus one row per edge in graph edge order.
// A file produced here reloads into an identical graph and re-exports
// byte-identically.
void write_edges_csv(const BipartiteGraph& g, std::ostream& out);

/// Loads the rank column of a ranking file for comparison. Accepts the
/// "entity,weight,rank" layout written by the rank command as well as the
/// baseline "entity,rank" layout (headerless input is read as entity,rank).
std::vector<std::pair<std::string, double>> load_rank_column(
    const std::filesystem::path& path);

}  // namespace techrank
