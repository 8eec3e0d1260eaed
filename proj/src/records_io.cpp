#include "ahspec/records_io.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>

#include "json.hpp"

#include "ahspec/errors.hpp"

namespace ahspec {

namespace {

using Row = std::vector<std::string>;

std::string quote_csv(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

Row split_csv(const std::string& line) {
    Row out(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                out.back() += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                out.back() += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.emplace_back();
        } else {
            out.back() += c;
        }
    }
    if (quoted) throw ValidationError("unterminated quoted CSV field");
    return out;
}

void write_row(std::ostream& out, const Row& row) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << quote_csv(row[i]);
    out << '\n';
}

// Consumes the schema line and the column header.
void expect_header(std::istream& in, const std::vector<std::string>& columns) {
    std::string line;
    if (!std::getline(in, line) || line != "#schema=" + std::to_string(kSchemaVersion))
        throw ValidationError("missing '#schema=" + std::to_string(kSchemaVersion) + "' line");
    if (!std::getline(in, line) || split_csv(line) != columns)
        throw ValidationError("CSV header does not match schema " + std::to_string(kSchemaVersion));
}

double rounded(double x) { return parse_number(format_number(x)); }

Row record_row(const EigenvalueRecord& r) {
    auto n = format_number;
    return {std::to_string(r.M),
            to_string(r.status),
            n(r.zeta_seed.real()),
            n(r.zeta_seed.imag()),
            n(r.xi_seed.real()),
            n(r.xi_seed.imag()),
            n(r.zeta_refined.real()),
            n(r.zeta_refined.imag()),
            n(r.xi_refined.real()),
            n(r.xi_refined.imag()),
            n(r.residual),
            std::to_string(r.newton_iters),
            r.winding ? std::to_string(*r.winding) : "",
            n(r.seed_gap_paper),
            n(r.seed_gap_solved),
            n(r.zeta_asymptotic.real()),
            n(r.zeta_asymptotic.imag()),
            n(r.zeta_asymptotic_gap),
            n(r.x_inf),
            r.message};
}

int parse_int(const std::string& s) {
    int v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) throw ValidationError("'" + s + "' is not an integer");
    return v;
}

EigenvalueRecord record_from_row(const Row& f) {
    auto d = [&](int i) { return parse_number(f[i]); };
    EigenvalueRecord r;
    r.M = parse_int(f[0]);
    r.status = record_status_from_string(f[1]);
    r.zeta_seed = {d(2), d(3)};
    r.xi_seed = {d(4), d(5)};
    r.zeta_refined = {d(6), d(7)};
    r.xi_refined = {d(8), d(9)};
    r.residual = d(10);
    r.newton_iters = parse_int(f[11]);
    if (!f[12].empty()) r.winding = parse_int(f[12]);
    r.seed_gap_paper = d(13);
    r.seed_gap_solved = d(14);
    r.zeta_asymptotic = {d(15), d(16)};
    r.zeta_asymptotic_gap = d(17);
    r.x_inf = d(18);
    r.message = f[19];
    return r;
}

nlohmann::json json_number(double x) {
    if (!std::isfinite(x)) return nullptr;
    return rounded(x);
}

double number_from_json(const nlohmann::json& j) {
    if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
    return j.get<double>();
}

}  // namespace

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (x == 0.0) return "0";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, kSignificantDigits);
    return std::string(buf, res.ptr);
}

std::string format_complex(Complex z) { return format_number(z.real()) + "," + format_number(z.imag()); }

double parse_number(const std::string& s) {
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    double v = 0.0;
    const char* first = s.data();
    if (!s.empty() && s[0] == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
        throw ValidationError("'" + s + "' is not a number");
    return v;
}

Complex parse_complex(const std::string& s) {
    const auto comma = s.find(',');
    if (comma == std::string::npos) return {parse_number(s), 0.0};
    return {parse_number(s.substr(0, comma)), parse_number(s.substr(comma + 1))};
}

const std::vector<std::string>& record_columns() {
    static const std::vector<std::string> cols = {
        "M",           "status",         "zeta_seed_re",    "zeta_seed_im",    "xi_seed_re",
        "xi_seed_im",  "zeta_refined_re", "zeta_refined_im", "xi_refined_re",   "xi_refined_im",
        "residual",    "newton_iters",   "winding",         "seed_gap_paper",  "seed_gap_solved",
        "zeta_asymptotic_re", "zeta_asymptotic_im", "zeta_asymptotic_rel_gap", "x_inf", "message"};
    return cols;
}

void write_records_csv(std::ostream& out, const std::vector<EigenvalueRecord>& records) {
    out << "#schema=" << kSchemaVersion << '\n';
    write_row(out, record_columns());
    for (const auto& r : records) write_row(out, record_row(r));
}

std::vector<EigenvalueRecord> read_records_csv(std::istream& in) {
    expect_header(in, record_columns());
    std::vector<EigenvalueRecord> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const Row f = split_csv(line);
        if (f.size() != record_columns().size())
            throw ValidationError("CSV row has " + std::to_string(f.size()) + " fields, expected " +
                                  std::to_string(record_columns().size()));
        out.push_back(record_from_row(f));
    }
    return out;
}

void write_records_json(std::ostream& out, const std::vector<EigenvalueRecord>& records) {
    auto arr = nlohmann::json::array();
    for (const auto& r : records) {
        nlohmann::json j;
        j["M"] = r.M;
        j["status"] = to_string(r.status);
        j["zeta_seed_re"] = json_number(r.zeta_seed.real());
        j["zeta_seed_im"] = json_number(r.zeta_seed.imag());
        j["xi_seed_re"] = json_number(r.xi_seed.real());
        j["xi_seed_im"] = json_number(r.xi_seed.imag());
        j["zeta_refined_re"] = json_number(r.zeta_refined.real());
        j["zeta_refined_im"] = json_number(r.zeta_refined.imag());
        j["xi_refined_re"] = json_number(r.xi_refined.real());
        j["xi_refined_im"] = json_number(r.xi_refined.imag());
        j["residual"] = json_number(r.residual);
        j["newton_iters"] = r.newton_iters;
        j["winding"] = r.winding ? nlohmann::json(*r.winding) : nlohmann::json(nullptr);
        j["seed_gap_paper"] = json_number(r.seed_gap_paper);
        j["seed_gap_solved"] = json_number(r.seed_gap_solved);
        j["zeta_asymptotic_re"] = json_number(r.zeta_asymptotic.real());
        j["zeta_asymptotic_im"] = json_number(r.zeta_asymptotic.imag());
        j["zeta_asymptotic_rel_gap"] = json_number(r.zeta_asymptotic_gap);
        j["x_inf"] = json_number(r.x_inf);
        j["message"] = r.message;
        arr.push_back(std::move(j));
    }
    out << arr.dump(2) << '\n';
}

std::vector<EigenvalueRecord> read_records_json(std::istream& in) {
    nlohmann::json arr;
    try {
        in >> arr;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("malformed JSON: ") + e.what());
    }
    if (!arr.is_array()) throw ValidationError("expected a JSON array of records");
    std::vector<EigenvalueRecord> out;
    try {
        for (const auto& j : arr) {
            auto d = [&](const char* key) { return number_from_json(j.at(key)); };
            EigenvalueRecord r;
            r.M = j.at("M").get<int>();
            r.status = record_status_from_string(j.at("status").get<std::string>());
            r.zeta_seed = {d("zeta_seed_re"), d("zeta_seed_im")};
            r.xi_seed = {d("xi_seed_re"), d("xi_seed_im")};
            r.zeta_refined = {d("zeta_refined_re"), d("zeta_refined_im")};
            r.xi_refined = {d("xi_refined_re"), d("xi_refined_im")};
            r.residual = d("residual");
            r.newton_iters = j.at("newton_iters").get<int>();
            if (!j.at("winding").is_null()) r.winding = j.at("winding").get<int>();
            r.seed_gap_paper = d("seed_gap_paper");
            r.seed_gap_solved = d("seed_gap_solved");
            r.zeta_asymptotic = {d("zeta_asymptotic_re"), d("zeta_asymptotic_im")};
            r.zeta_asymptotic_gap = d("zeta_asymptotic_rel_gap");
            r.x_inf = d("x_inf");
            r.message = j.at("message").get<std::string>();
            out.push_back(std::move(r));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("record does not match schema: ") + e.what());
    }
    return out;
}

void write_profile_csv(std::ostream& out, const std::vector<ProfileSample>& samples) {
    out << "#schema=" << kSchemaVersion << '\n';
    out << "x,log10_abs_f,arg_f\n";
    for (const auto& s : samples)
        out << format_number(s.x) << ',' << format_number(s.log_abs / std::log(10.0)) << ',' << format_number(s.arg)
            << '\n';
}

std::vector<ProfileSample> read_profile_csv(std::istream& in) {
    expect_header(in, {"x", "log10_abs_f", "arg_f"});
    std::vector<ProfileSample> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const Row f = split_csv(line);
        if (f.size() != 3) throw ValidationError("profile row must have 3 fields");
        out.push_back({parse_number(f[0]), parse_number(f[1]) * std::log(10.0), parse_number(f[2])});
    }
    return out;
}

}  // namespace ahspec
