#include "ddfrac/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace ddfrac {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

/// Writes through a temporary file and renames, so readers never observe a
/// partial file.
void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
        out << content;
        if (!out) throw IoError("write failed: " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("rename failed: " + path.string() + " (" + ec.message() + ")");
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

double parse_double(std::string_view field, const std::filesystem::path& path) {
    double v = 0.0;
    const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
    if (res.ec != std::errc{} || res.ptr != field.data() + field.size()) {
        throw IoError("bad numeric field '" + std::string(field) + "' in " + path.string());
    }
    return v;
}

std::vector<std::string_view> split_csv(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return out;
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string format_double_full(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

void write_dataset_csv(const ResistanceDataSet& d, const std::filesystem::path& csv_path) {
    std::string body = "a,F_R,G_R\n";
    for (const auto& pt : d.points()) {
        body += format_double_full(pt.a_hat);
        body += ',';
        body += format_double_full(pt.F_R_hat);
        body += ',';
        body += format_double_full(pt.G_R_hat);
        body += '\n';
    }
    write_file_atomic(csv_path, body);
}

void write_dataset_meta(const ResistanceDataSet& d, const std::filesystem::path& json_path) {
    ordered_json j;
    j["model"] = d.meta().model;
    j["N"] = d.meta().N;
    j["noise_amplitude"] = d.meta().noise_amplitude;
    j["seed"] = d.meta().seed;
    j["sampling"] = d.meta().sampling;
    write_file_atomic(json_path, j.dump(2) + "\n");
}

ResistanceDataSet read_dataset_csv(const std::filesystem::path& csv_path,
                                   const std::filesystem::path& meta_path) {
    std::istringstream in(read_file(csv_path));
    std::string line;
    if (!std::getline(in, line) || line.rfind("a,F_R,G_R", 0) != 0) {
        throw IoError("dataset CSV missing 'a,F_R,G_R' header: " + csv_path.string());
    }
    std::vector<ResistancePoint> pts;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split_csv(line);
        if (fields.size() != 3) throw IoError("dataset CSV row needs 3 fields: " + csv_path.string());
        pts.push_back({parse_double(fields[0], csv_path), parse_double(fields[1], csv_path),
                       parse_double(fields[2], csv_path)});
    }

    DatasetMeta meta;
    meta.N = static_cast<int>(pts.size());
    if (!meta_path.empty() && std::filesystem::exists(meta_path)) {
        const json j = json::parse(read_file(meta_path));
        meta.model = j.value("model", "");
        meta.N = j.value("N", meta.N);
        meta.noise_amplitude = j.value("noise_amplitude", 0.0);
        meta.seed = j.value("seed", std::uint64_t{0});
        meta.sampling = j.value("sampling", "random");
    }
    return ResistanceDataSet(std::move(pts), std::move(meta));
}

void write_trace_csv(const SolutionTrace& t, const std::filesystem::path& path) {
    std::string body = "k,DeltaT,a,Delta,P,G_DD,dissipative,failed\n";
    for (const auto& st : t.steps) {
        body += std::to_string(st.k);
        body += ',';
        body += format_double(st.DeltaT);
        body += ',';
        body += format_double(st.a);
        body += ',';
        body += format_double(st.Delta);
        body += ',';
        body += format_double(st.P);
        body += ',';
        if (st.G_DD.has_value()) body += format_double(*st.G_DD);
        body += ',';
        body += st.dissipative ? '1' : '0';
        body += ',';
        body += st.failed ? '1' : '0';
        body += '\n';
    }
    write_file_atomic(path, body);
}

SolutionTrace read_trace_csv(const std::filesystem::path& path) {
    std::istringstream in(read_file(path));
    std::string line;
    if (!std::getline(in, line) || line.rfind("k,DeltaT,a,Delta,P,G_DD,dissipative,failed", 0) != 0) {
        throw IoError("trace CSV missing expected header: " + path.string());
    }
    SolutionTrace t;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split_csv(line);
        if (fields.size() != 8) throw IoError("trace CSV row needs 8 fields: " + path.string());
        TraceStep st;
        st.k = static_cast<int>(parse_double(fields[0], path));
        st.DeltaT = parse_double(fields[1], path);
        st.a = parse_double(fields[2], path);
        st.Delta = parse_double(fields[3], path);
        st.P = parse_double(fields[4], path);
        if (!fields[5].empty()) st.G_DD = parse_double(fields[5], path);
        st.dissipative = fields[6] == "1";
        st.failed = fields[7] == "1";
        t.steps.push_back(st);
    }
    return t;
}

void write_report_json(const ConvergenceReport& r, const std::filesystem::path& path) {
    ordered_json j;
    j["schema"] = 1;
    j["study"] = r.study;
    j["solver"] = solver_name(r.solver);
    j["seed"] = r.seed;
    j["schedule"] = r.schedule;
    j["reference_a"] = r.reference_a;
    j["entries"] = ordered_json::array();
    for (const auto& e : r.entries) {
        ordered_json je;
        je["parameter"] = e.parameter;
        je["N"] = e.N;
        je["noise_amplitude"] = e.noise_amplitude;
        je["replications"] = e.replications;
        je["mu"] = e.mu;
        je["sigma"] = e.sigma;
        je["errors"] = e.errors;
        je["histogram"]["bin_width"] = 0.1 * e.mu;
        je["histogram"]["counts"] = e.histogram;
        je["histogram"]["overflow"] = e.overflow;
        je["envelope"]["min"] = e.envelope_min;
        je["envelope"]["max"] = e.envelope_max;
        je["failure_steps"] = e.failure_steps;
        j["entries"].push_back(je);
    }
    write_file_atomic(path, j.dump(2) + "\n");
}

void write_report_histograms(const ConvergenceReport& r, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    for (const auto& e : r.entries) {
        std::string body = "bin_lo,bin_hi,count\n";
        const double w = 0.1 * e.mu;
        for (std::size_t i = 0; i < e.histogram.size(); ++i) {
            body += format_double(w * i);
            body += ',';
            body += format_double(w * (i + 1));
            body += ',';
            body += std::to_string(e.histogram[i]);
            body += '\n';
        }
        body += format_double(2.0 * e.mu);
        body += ",inf,";
        body += std::to_string(e.overflow);
        body += '\n';
        std::ostringstream name;
        name << "histogram_" << r.study << "_" << format_double(e.parameter) << ".csv";
        write_file_atomic(dir / name.str(), body);
    }
}

}  // namespace ddfrac
