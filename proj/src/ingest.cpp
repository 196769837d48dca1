#include "techrank/ingest.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "techrank/csv.hpp"

namespace techrank {

namespace {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open file: " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw IoError("cannot read file: " + path.string());
    return std::move(buffer).str();
}

bool header_matches(const csv::Record& record, std::initializer_list<const char*> names) {
    if (record.fields.size() != names.size()) return false;
    auto it = names.begin();
    for (const std::string& field : record.fields) {
        if (csv::trim(field) != *it++) return false;
    }
    return true;
}

std::string require_trimmed(const csv::Record& record, std::size_t column,
                            const char* what) {
    std::string value = csv::trim(record.fields[column]);
    if (value.empty()) {
        throw ParseError(record.line, std::string("empty ") + what + " field");
    }
    return value;
}

std::uint64_t parse_positive_integer(const std::string& text, std::size_t line,
                                     const char* what) {
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || value == 0) {
        throw ParseError(line, std::string("invalid ") + what + " '" + text +
                                   "' (positive integer expected)");
    }
    return value;
}

double parse_double(const std::string& text, std::size_t line, const char* what) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ParseError(line, std::string("invalid ") + what + " '" + text + "'");
    }
    return value;
}

// Splits into physical lines for JSONL; keeps 1-based numbering.
std::vector<std::pair<std::size_t, std::string_view>> split_lines(std::string_view text) {
    std::vector<std::pair<std::size_t, std::string_view>> lines;
    std::size_t line_no = 1;
    std::size_t begin = 0;
    while (begin <= text.size()) {
        std::size_t end = text.find('\n', begin);
        std::string_view line = (end == std::string_view::npos)
                                    ? text.substr(begin)
                                    : text.substr(begin, end - begin);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.emplace_back(line_no, line);
        if (end == std::string_view::npos) break;
        begin = end + 1;
        ++line_no;
    }
    return lines;
}

std::string json_string_field(const nlohmann::json& object, const char* key,
                              std::size_t line) {
    auto it = object.find(key);
    if (it == object.end()) {
        throw MissingColumnError(line, std::string("missing field '") + key + "'");
    }
    if (!it->is_string()) {
        throw ParseError(line, std::string("field '") + key + "' is not a string");
    }
    return it->get<std::string>();
}

EdgeLoadResult load_edges_csv(const std::string& content) {
    EdgeLoadResult result;
    auto records = csv::parse(content);
    std::size_t first = 0;
    if (!records.empty() && header_matches(records[0], {"company", "technology"})) {
        first = 1;
    }
    for (std::size_t i = first; i < records.size(); ++i) {
        const auto& record = records[i];
        if (record.fields.size() < 2) {
            throw MissingColumnError(record.line, "expected columns company,technology");
        }
        if (record.fields.size() > 2) ++result.extra_field_rows;
        EdgeRecord edge;
        edge.company = require_trimmed(record, 0, "company");
        edge.technology = require_trimmed(record, 1, "technology");
        result.records.push_back(std::move(edge));
    }
    return result;
}

EdgeLoadResult load_edges_jsonl(const std::string& content) {
    EdgeLoadResult result;
    for (const auto& [line_no, line] : split_lines(content)) {
        if (csv::trim(line).empty()) continue;
        nlohmann::json object = nlohmann::json::parse(line, nullptr, false);
        if (object.is_discarded()) throw ParseError(line_no, "invalid JSON");
        if (!object.is_object()) throw ParseError(line_no, "expected a JSON object");
        EdgeRecord edge;
        edge.company = csv::trim(json_string_field(object, "company", line_no));
        edge.technology = csv::trim(json_string_field(object, "technology", line_no));
        if (edge.company.empty()) throw ParseError(line_no, "empty company field");
        if (edge.technology.empty()) throw ParseError(line_no, "empty technology field");
        result.records.push_back(std::move(edge));
    }
    return result;
}

bool is_word_byte(unsigned char ch) {
    return std::isalnum(ch) || ch == '_' || ch >= 0x80;
}

std::string ascii_fold(std::string_view text) {
    std::string folded(text);
    for (char& ch : folded) {
        unsigned char u = static_cast<unsigned char>(ch);
        if (u < 0x80) ch = static_cast<char>(std::tolower(u));
    }
    return folded;
}

// Whole-word occurrence: the match may not butt against word bytes on
// either side. Characters inside the keyword (hyphens, spaces) are free.
bool contains_whole_word(const std::string& text, const std::string& keyword) {
    if (keyword.empty()) return false;
    std::size_t from = 0;
    while (true) {
        std::size_t pos = text.find(keyword, from);
        if (pos == std::string::npos) return false;
        bool left_ok = pos == 0 || !is_word_byte(static_cast<unsigned char>(text[pos - 1]));
        std::size_t end = pos + keyword.size();
        bool right_ok = end == text.size() || !is_word_byte(static_cast<unsigned char>(text[end]));
        if (left_ok && right_ok) return true;
        from = pos + 1;
    }
}

}  // namespace

EdgeLoadResult load_edges(const std::filesystem::path& path, EdgeFormat format) {
    std::string content = read_file(path);
    return format == EdgeFormat::Csv ? load_edges_csv(content) : load_edges_jsonl(content);
}

EdgeFormat detect_edge_format(const std::filesystem::path& path) {
    auto extension = path.extension().string();
    if (extension == ".jsonl" || extension == ".ndjson") return EdgeFormat::Jsonl;
    return EdgeFormat::Csv;
}

BaselineRanking load_baseline(const std::filesystem::path& path) {
    std::string content = read_file(path);
    auto records = csv::parse(content);
    std::size_t first = 0;
    if (!records.empty() && header_matches(records[0], {"entity", "rank"})) first = 1;

    BaselineRanking baseline;
    std::unordered_set<std::string> seen;
    for (std::size_t i = first; i < records.size(); ++i) {
        const auto& record = records[i];
        if (record.fields.size() < 2) {
            throw MissingColumnError(record.line, "expected columns entity,rank");
        }
        BaselineEntry entry;
        entry.entity = require_trimmed(record, 0, "entity");
        entry.rank = parse_positive_integer(csv::trim(record.fields[1]), record.line, "rank");
        if (!seen.insert(entry.entity).second) {
            throw DuplicateEntityError("duplicate entity '" + entry.entity + "'");
        }
        baseline.entries.push_back(std::move(entry));
    }
    return baseline;
}

std::vector<CompanyDoc> load_docs(const std::filesystem::path& path) {
    std::string content = read_file(path);
    std::vector<CompanyDoc> docs;
    std::unordered_set<std::string> seen;
    for (const auto& [line_no, line] : split_lines(content)) {
        if (csv::trim(line).empty()) continue;
        nlohmann::json object = nlohmann::json::parse(line, nullptr, false);
        if (object.is_discarded()) throw ParseError(line_no, "invalid JSON");
        if (!object.is_object()) throw ParseError(line_no, "expected a JSON object");
        CompanyDoc doc;
        doc.company = csv::trim(json_string_field(object, "company", line_no));
        if (doc.company.empty()) throw ParseError(line_no, "empty company field");
        doc.description = json_string_field(object, "description", line_no);
        if (!seen.insert(doc.company).second) {
            throw DuplicateEntityError("duplicate company '" + doc.company + "'");
        }
        docs.push_back(std::move(doc));
    }
    return docs;
}

std::set<std::string> keyword_filter(std::span<const CompanyDoc> docs,
                                     const std::set<std::string>& keywords,
                                     const KeywordFilterOptions& options) {
    if (options.min_hits < 1) throw std::invalid_argument("min_hits must be >= 1");
    if (keywords.empty()) throw std::invalid_argument("keyword set must be non-empty");

    std::vector<std::string> needles;
    needles.reserve(keywords.size());
    for (const std::string& keyword : keywords) {
        if (keyword.empty()) continue;
        needles.push_back(options.case_sensitive ? keyword : ascii_fold(keyword));
    }

    std::set<std::string> selected;
    for (const CompanyDoc& doc : docs) {
        const std::string text =
            options.case_sensitive ? doc.description : ascii_fold(doc.description);
        std::size_t distinct_hits = 0;
        for (const std::string& needle : needles) {
            if (contains_whole_word(text, needle)) {
                if (++distinct_hits >= options.min_hits) break;
            }
        }
        if (distinct_hits >= options.min_hits) selected.insert(doc.company);
    }
    return selected;
}

BuildResult graph_from_records(std::span<const EdgeRecord> records) {
    std::vector<std::string> companies;
    std::vector<std::string> technologies;
    std::unordered_map<std::string, std::uint32_t> company_seen;
    std::unordered_map<std::string, std::uint32_t> technology_seen;
    std::vector<std::pair<std::string, std::string>> pairs;
    pairs.reserve(records.size());
    for (const EdgeRecord& record : records) {
        if (company_seen.emplace(record.company, companies.size()).second) {
            companies.push_back(record.company);
        }
        if (technology_seen.emplace(record.technology, technologies.size()).second) {
            technologies.push_back(record.technology);
        }
        pairs.emplace_back(record.company, record.technology);
    }
    return build_graph(std::move(companies), std::move(technologies), pairs);
}

void write_edges_csv(const BipartiteGraph& g, std::ostream& out) {
    out << "company,technology\n";
    for (const Edge& e : g.edges()) {
        out << csv::escape(g.company_labels()[e.company]) << ','
            << csv::escape(g.technology_labels()[e.technology]) << '\n';
    }
}

std::vector<std::pair<std::string, double>> load_rank_column(
    const std::filesystem::path& path) {
    std::string content = read_file(path);
    auto records = csv::parse(content);

    std::size_t first = 0;
    std::size_t rank_column = 1;
    std::size_t min_fields = 2;
    if (!records.empty() && header_matches(records[0], {"entity", "weight", "rank"})) {
        first = 1;
        rank_column = 2;
        min_fields = 3;
    } else if (!records.empty() && header_matches(records[0], {"entity", "rank"})) {
        first = 1;
    }

    std::vector<std::pair<std::string, double>> ranks;
    std::unordered_set<std::string> seen;
    for (std::size_t i = first; i < records.size(); ++i) {
        const auto& record = records[i];
        if (record.fields.size() < min_fields) {
            throw MissingColumnError(record.line, "too few columns for a ranking row");
        }
        std::string entity = require_trimmed(record, 0, "entity");
        double rank = parse_double(csv::trim(record.fields[rank_column]), record.line, "rank");
        if (!seen.insert(entity).second) {
            throw DuplicateEntityError("duplicate entity '" + entity + "'");
        }
        ranks.emplace_back(std::move(entity), rank);
    }
    return ranks;
}

}  // namespace techrank
