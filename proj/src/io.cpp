#include "hitrun/io.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace hitrun::io {

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << std::setprecision(17);
    return f;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open for reading: " + path);
    return f;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream is(line);
    while (std::getline(is, field, ',')) out.push_back(field);
    return out;
}

std::string iso_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

}  // namespace

void write_points_csv(const std::string& path, const std::vector<Rvec>& points) {
    auto f = open_out(path);
    if (points.empty()) {
        f << "x0\n";
        return;
    }
    const long d = points.front().size();
    for (long i = 0; i < d; ++i) f << (i ? "," : "") << "x" << i;
    f << "\n";
    for (const auto& p : points) {
        for (long i = 0; i < d; ++i) f << (i ? "," : "") << p(i);
        f << "\n";
    }
}

std::vector<Rvec> read_points_csv(const std::string& path) {
    auto f = open_in(path);
    std::string line;
    if (!std::getline(f, line)) throw std::runtime_error("empty CSV: " + path);
    const long d = static_cast<long>(split_csv(line).size());
    std::vector<Rvec> out;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        const auto fields = split_csv(line);
        if (static_cast<long>(fields.size()) != d)
            throw std::runtime_error("ragged CSV row in " + path);
        Rvec p(d);
        for (long i = 0; i < d; ++i) p(i) = std::stod(fields[i]);
        out.push_back(std::move(p));
    }
    return out;
}

void write_states_csv(const std::string& path, const std::vector<DensityMatrix>& states) {
    auto f = open_out(path);
    if (states.empty()) {
        f << "re_0_0,im_0_0\n";
        return;
    }
    const int n = states.front().dim();
    bool first = true;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j) {
            f << (first ? "" : ",") << "re_" << i << "_" << j << ",im_" << i << "_" << j;
            first = false;
        }
    f << "\n";
    for (const auto& s : states) {
        first = true;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j <= i; ++j) {
                f << (first ? "" : ",") << s.mat()(i, j).real() << ","
                  << s.mat()(i, j).imag();
                first = false;
            }
        f << "\n";
    }
}

std::vector<DensityMatrix> read_states_csv(const std::string& path) {
    auto f = open_in(path);
    std::string line;
    if (!std::getline(f, line)) throw std::runtime_error("empty CSV: " + path);
    const std::size_t cols = split_csv(line).size();
    // cols = n(n+1) for the re/im lower triangle
    int n = 1;
    while (static_cast<std::size_t>(n) * (n + 1) < cols) ++n;
    if (static_cast<std::size_t>(n) * (n + 1) != cols)
        throw std::runtime_error("unrecognized state CSV layout in " + path);
    std::vector<DensityMatrix> out;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        const auto fields = split_csv(line);
        if (fields.size() != cols)
            throw std::runtime_error("ragged CSV row in " + path);
        Cmat m(n, n);
        std::size_t c = 0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j <= i; ++j) {
                const double re = std::stod(fields[c]);
                const double im = std::stod(fields[c + 1]);
                c += 2;
                m(i, j) = {re, im};
                if (i != j) m(j, i) = {re, -im};
            }
        out.emplace_back(std::move(m));
    }
    return out;
}

void write_curve_csv(const std::string& path,
                     const std::vector<std::pair<double, double>>& rows) {
    auto f = open_out(path);
    f << "x,density\n";
    for (const auto& [x, y] : rows) f << x << "," << y << "\n";
}

void write_spectra_csv(const std::string& path,
                       const std::vector<std::tuple<long, int, double>>& rows) {
    auto f = open_out(path);
    f << "state,eig,value\n";
    for (const auto& [s, i, v] : rows) f << s << "," << i << "," << v << "\n";
}

std::vector<double> read_spectra_values(const std::string& path) {
    auto f = open_in(path);
    std::string line;
    if (!std::getline(f, line)) throw std::runtime_error("empty CSV: " + path);
    // accept either a spectra table (value in last column) or a 1-column list
    std::vector<double> out;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        const auto fields = split_csv(line);
        out.push_back(std::stod(fields.back()));
    }
    return out;
}

std::string sha256_file(const std::string& path) {
    auto f = open_in(path);
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
    char buf[1 << 16];
    while (f.read(buf, sizeof buf) || f.gcount() > 0)
        EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(f.gcount()));
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx, digest, &len);
    EVP_MD_CTX_free(ctx);
    std::ostringstream os;
    os << std::hex << std::setfill('0');
    for (unsigned int i = 0; i < len; ++i) os << std::setw(2) << static_cast<int>(digest[i]);
    return os.str();
}

void write_json(const std::string& path, const nlohmann::json& j) {
    auto f = open_out(path);
    f << j.dump(2) << "\n";
}

nlohmann::json read_json(const std::string& path) {
    auto f = open_in(path);
    return nlohmann::json::parse(f);
}

nlohmann::json make_manifest(const std::string& command_line,
                             const nlohmann::json& body_descriptor,
                             const nlohmann::json& config,
                             const std::vector<std::string>& output_files) {
    nlohmann::json outputs = nlohmann::json::array();
    for (const auto& p : output_files)
        outputs.push_back({{"path", p}, {"sha256", sha256_file(p)}});
    return {{"command", command_line},
            {"body", body_descriptor},
            {"config", config},
            {"created", iso_timestamp()},
            {"outputs", outputs}};
}

}  // namespace hitrun::io
