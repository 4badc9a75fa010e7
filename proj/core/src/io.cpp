#include "poikit/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <system_error>
#include <utility>

#include "json.hpp"

namespace poikit {

namespace {

using nlohmann::ordered_json;

// ---- number formatting / parsing -------------------------------------------

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);  // shortest round-trip form
    return std::string(buf, res.ptr);
}

std::string format_int(std::int64_t v) {
    char buf[24];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

bool parse_double(std::string_view field, double& out) {
    const char* first = field.data();
    const char* last = field.data() + field.size();
    const auto res = std::from_chars(first, last, out);
    return res.ec == std::errc{} && res.ptr == last && std::isfinite(out);
}

bool parse_int(std::string_view field, std::int64_t& out) {
    const char* first = field.data();
    const char* last = field.data() + field.size();
    const auto res = std::from_chars(first, last, out);
    return res.ec == std::errc{} && res.ptr == last;
}

// Epoch seconds; fractional input is truncated toward zero.
bool parse_timestamp(std::string_view field, std::int64_t& out) {
    if (parse_int(field, out)) {
        return true;
    }
    double seconds = 0.0;
    if (!parse_double(field, seconds)) {
        return false;
    }
    out = static_cast<std::int64_t>(std::trunc(seconds));
    return true;
}

// ---- CSV primitives ---------------------------------------------------------

bool needs_quoting(std::string_view field) {
    return field.find_first_of(",\"\r\n") != std::string_view::npos;
}

void append_csv_field(std::string& line, std::string_view field) {
    if (!needs_quoting(field)) {
        line.append(field);
        return;
    }
    line.push_back('"');
    for (char c : field) {
        if (c == '"') {
            line.push_back('"');
        }
        line.push_back(c);
    }
    line.push_back('"');
}

std::string csv_row(std::span<const std::string> fields) {
    std::string line;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i > 0) {
            line.push_back(',');
        }
        append_csv_field(line, fields[i]);
    }
    line.push_back('\n');
    return line;
}

// Splits one physical line; embedded newlines inside quotes are not supported.
bool split_csv(std::string_view line, std::vector<std::string>& out) {
    out.clear();
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(c);
            }
        } else if (c == '"' && field.empty()) {
            quoted = true;
        } else if (c == ',') {
            out.push_back(std::move(field));
            field.clear();
        } else {
            field.push_back(c);
        }
    }
    if (quoted) {
        return false;  // unterminated quote
    }
    out.push_back(std::move(field));
    return true;
}

// ---- file plumbing ----------------------------------------------------------

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);  // binary keeps line endings ours
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    return out;
}

void finish_output(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) {
        throw IoError("write failed for " + path.string());
    }
}

// Reads one line, strips a trailing CR, tracks the 1-based line number.
bool next_line(std::istream& in, std::string& line, std::size_t& line_no) {
    if (!std::getline(in, line)) {
        return false;
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    ++line_no;
    return true;
}

[[noreturn]] void row_error(const std::filesystem::path& path, std::size_t row,
                            const std::string& what) {
    throw ParseError(path.string() + ": row " + std::to_string(row) + ": " + what);
}

void expect_header(std::istream& in, const std::filesystem::path& path,
                   std::string_view expected, std::size_t& line_no) {
    std::string line;
    if (!next_line(in, line, line_no) || line != expected) {
        throw ParseError(path.string() + ": bad header (expected '" + std::string(expected) +
                         "')");
    }
}

std::optional<double> parse_optional(const std::filesystem::path& path, std::size_t row,
                                     const std::string& field, const char* name,
                                     bool non_negative) {
    if (field.empty()) {
        return std::nullopt;
    }
    double v = 0.0;
    if (!parse_double(field, v)) {
        row_error(path, row, std::string("parse error (bad ") + name + ")");
    }
    if (non_negative && v < 0.0) {
        row_error(path, row, std::string("parse error (") + name + " must be non-negative)");
    }
    return v;
}

constexpr std::string_view kTrajectoryHeader = "user_id,timestamp,lat,lon,alt,speed,h_acc,v_acc";
constexpr std::string_view kGroundTruthHeader = "user_id,gt_id,lat,lon,validated,category,other_text";
constexpr std::string_view kRocHeader = "parameter_label,fpr,tpr";

}  // namespace

std::vector<ClusterRef> cluster_refs(std::span<const ClusterRecord> records) {
    std::vector<ClusterRef> refs;
    refs.reserve(records.size());
    for (const ClusterRecord& r : records) {
        refs.push_back({r.cluster_id, {r.centroid_lat, r.centroid_lon}});
    }
    return refs;
}

std::map<std::string, Trajectory> read_trajectories(const std::filesystem::path& path) {
    std::ifstream in = open_input(path);
    std::size_t line_no = 0;
    expect_header(in, path, kTrajectoryHeader, line_no);

    std::map<std::string, std::vector<TrajectoryPoint>> rows;
    std::string line;
    std::vector<std::string> fields;
    while (next_line(in, line, line_no)) {
        if (!split_csv(line, fields) || fields.size() != 8) {
            row_error(path, line_no, "parse error (expected 8 fields)");
        }
        TrajectoryPoint p;
        p.user_id = fields[0];
        if (p.user_id.empty()) {
            row_error(path, line_no, "parse error (empty user_id)");
        }
        if (!parse_timestamp(fields[1], p.timestamp)) {
            row_error(path, line_no, "parse error (bad timestamp)");
        }
        if (!parse_double(fields[2], p.lat) || !parse_double(fields[3], p.lon)) {
            row_error(path, line_no, "parse error (bad coordinate)");
        }
        if (!valid_position({p.lat, p.lon})) {
            row_error(path, line_no, "coordinate out of range");
        }
        p.alt = parse_optional(path, line_no, fields[4], "alt", false);
        p.speed = parse_optional(path, line_no, fields[5], "speed", true);
        p.h_acc = parse_optional(path, line_no, fields[6], "h_acc", true);
        p.v_acc = parse_optional(path, line_no, fields[7], "v_acc", true);
        rows[p.user_id].push_back(std::move(p));
    }

    std::map<std::string, Trajectory> out;
    for (auto& [user_id, points] : rows) {
        out.emplace(user_id, make_trajectory(user_id, std::move(points)));
    }
    return out;
}

void write_trajectories(const std::map<std::string, Trajectory>& trajectories,
                        const std::filesystem::path& path) {
    std::ofstream out = open_output(path);
    out << kTrajectoryHeader << '\n';
    auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
    for (const auto& [user_id, traj] : trajectories) {
        for (const TrajectoryPoint& p : traj.points) {
            const std::string fields[] = {user_id,
                                          format_int(p.timestamp),
                                          format_double(p.lat),
                                          format_double(p.lon),
                                          opt(p.alt),
                                          opt(p.speed),
                                          opt(p.h_acc),
                                          opt(p.v_acc)};
            out << csv_row(fields);
        }
    }
    finish_output(out, path);
}

std::map<std::string, std::vector<GroundTruthPoint>> read_ground_truth(
    const std::filesystem::path& path) {
    std::ifstream in = open_input(path);
    std::size_t line_no = 0;
    expect_header(in, path, kGroundTruthHeader, line_no);

    std::map<std::string, std::vector<GroundTruthPoint>> out;
    std::map<std::string, std::set<int>> seen_ids;
    std::string line;
    std::vector<std::string> fields;
    while (next_line(in, line, line_no)) {
        if (!split_csv(line, fields) || fields.size() != 7) {
            row_error(path, line_no, "parse error (expected 7 fields)");
        }
        const std::string& user_id = fields[0];
        if (user_id.empty()) {
            row_error(path, line_no, "parse error (empty user_id)");
        }
        GroundTruthPoint g;
        std::int64_t gt_id = 0;
        if (!parse_int(fields[1], gt_id)) {
            row_error(path, line_no, "parse error (bad gt_id)");
        }
        g.gt_id = static_cast<int>(gt_id);
        if (!seen_ids[user_id].insert(g.gt_id).second) {
            row_error(path, line_no, "duplicate gt_id");
        }
        if (!parse_double(fields[2], g.lat) || !parse_double(fields[3], g.lon)) {
            row_error(path, line_no, "parse error (bad coordinate)");
        }
        if (!valid_position({g.lat, g.lon})) {
            row_error(path, line_no, "coordinate out of range");
        }
        std::string validated = fields[4];
        std::transform(validated.begin(), validated.end(), validated.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        if (validated == "yes") {
            g.validated = true;
        } else if (validated == "no") {
            g.validated = false;
        } else {
            row_error(path, line_no, "parse error (validated must be yes or no)");
        }
        if (!fields[5].empty()) {
            g.category = parse_category(fields[5]);
            if (!g.category) {
                row_error(path, line_no, "unknown category '" + fields[5] + "'");
            }
        }
        g.other_text = fields[6];
        if (!g.other_text.empty() && g.category != Category::kOther) {
            row_error(path, line_no, "parse error (other_text requires category=other)");
        }
        out[user_id].push_back(std::move(g));
    }
    return out;
}

void write_ground_truth(const std::map<std::string, std::vector<GroundTruthPoint>>& gt,
                        const std::filesystem::path& path) {
    std::ofstream out = open_output(path);
    out << kGroundTruthHeader << '\n';
    for (const auto& [user_id, points] : gt) {
        for (const GroundTruthPoint& g : points) {
            const std::string fields[] = {
                user_id,
                format_int(g.gt_id),
                format_double(g.lat),
                format_double(g.lon),
                g.validated ? "yes" : "no",
                g.category ? std::string(category_name(*g.category)) : std::string(),
                g.other_text};
            out << csv_row(fields);
        }
    }
    finish_output(out, path);
}

void write_clusters(const std::map<std::string, std::vector<Cluster>>& clusters,
                    const std::filesystem::path& path) {
    ordered_json doc = ordered_json::array();
    for (const auto& [user_id, user_clusters] : clusters) {
        for (const Cluster& c : user_clusters) {
            ordered_json row;
            row["user_id"] = user_id;
            row["cluster_id"] = c.id;
            row["centroid_lat"] = c.centroid.lat;
            row["centroid_lon"] = c.centroid.lon;
            row["radius_m"] = c.radius_m;
            row["visit_count"] = c.visit_count;
            row["first_seen"] = c.first_seen;
            row["last_seen"] = c.last_seen;
            row["member_count"] = static_cast<std::int64_t>(c.members.size());
            doc.push_back(std::move(row));
        }
    }
    std::ofstream out = open_output(path);
    out << doc.dump(2) << '\n';
    finish_output(out, path);
}

std::map<std::string, std::vector<ClusterRecord>> read_clusters(
    const std::filesystem::path& path) {
    std::ifstream in = open_input(path);
    ordered_json doc;
    try {
        doc = ordered_json::parse(in);
    } catch (const ordered_json::parse_error& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    if (!doc.is_array()) {
        throw ParseError(path.string() + ": expected a top-level array");
    }
    static constexpr const char* kKeys[] = {"user_id",    "cluster_id", "centroid_lat",
                                            "centroid_lon", "radius_m",   "visit_count",
                                            "first_seen", "last_seen",  "member_count"};
    std::map<std::string, std::vector<ClusterRecord>> out;
    for (std::size_t i = 0; i < doc.size(); ++i) {
        const ordered_json& row = doc[i];
        const std::string where = path.string() + ": entry " + std::to_string(i);
        if (!row.is_object()) {
            throw ParseError(where + ": expected an object");
        }
        for (const char* key : kKeys) {
            if (!row.contains(key)) {
                throw ParseError(where + ": missing key '" + key + "'");
            }
        }
        if (row.size() != std::size(kKeys)) {
            throw ParseError(where + ": unexpected extra keys");
        }
        try {
            ClusterRecord rec;
            rec.user_id = row["user_id"].get<std::string>();
            rec.cluster_id = row["cluster_id"].get<int>();
            rec.centroid_lat = row["centroid_lat"].get<double>();
            rec.centroid_lon = row["centroid_lon"].get<double>();
            rec.radius_m = row["radius_m"].get<double>();
            rec.visit_count = row["visit_count"].get<int>();
            rec.first_seen = row["first_seen"].get<std::int64_t>();
            rec.last_seen = row["last_seen"].get<std::int64_t>();
            rec.member_count = row["member_count"].get<std::int64_t>();
            out[rec.user_id].push_back(std::move(rec));
        } catch (const ordered_json::exception& e) {
            throw ParseError(where + ": " + e.what());
        }
    }
    return out;
}

void write_roc(std::span<const RocPoint> points, const std::filesystem::path& path) {
    std::ofstream out = open_output(path);
    out << kRocHeader << '\n';
    for (const RocPoint& p : points) {
        const std::string fields[] = {p.parameter_label, format_double(p.fpr),
                                      format_double(p.tpr)};
        out << csv_row(fields);
    }
    finish_output(out, path);
}

std::vector<RocPoint> read_roc(const std::filesystem::path& path) {
    std::ifstream in = open_input(path);
    std::size_t line_no = 0;
    expect_header(in, path, kRocHeader, line_no);
    std::vector<RocPoint> points;
    std::string line;
    std::vector<std::string> fields;
    while (next_line(in, line, line_no)) {
        if (!split_csv(line, fields) || fields.size() != 3) {
            row_error(path, line_no, "parse error (expected 3 fields)");
        }
        RocPoint p;
        p.parameter_label = fields[0];
        if (!parse_double(fields[1], p.fpr) || !parse_double(fields[2], p.tpr)) {
            row_error(path, line_no, "parse error (bad rate)");
        }
        points.push_back(std::move(p));
    }
    return points;
}

}  // namespace poikit
