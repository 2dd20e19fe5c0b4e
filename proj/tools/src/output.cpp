#include "omitlab_cli/output.hpp"

#include "omitlab/format.hpp"
#include "omitlab_cli/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace omit::cli {

std::string g6(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string spectrum_csv(std::span<const ResponsePoint> pts) {
    std::string out = "x,re_epsT,im_epsT,abs_epsT\n";
    for (const auto& p : pts) {
        out += g12(p.x) + ',' + g12(p.re) + ',' + g12(p.im) + ',' + g12(std::abs(p.eps_T));
        out += '\n';
    }
    return out;
}

std::string delay_csv(std::span<const DelayPoint> pts) {
    std::string out = "x,tau\n";
    for (const auto& p : pts) out += g12(p.x) + ',' + g12(p.tau) + '\n';
    return out;
}

void write_text(const std::filesystem::path& file, const std::string& body) {
    std::ofstream os(file, std::ios::binary | std::ios::trunc);
    if (!os) throw ConfigError("output.path", "cannot write " + file.string());
    os << body;
    if (!os) throw ConfigError("output.path", "write failed for " + file.string());
}

void write_json(const std::filesystem::path& file, const nlohmann::ordered_json& doc) {
    write_text(file, doc.dump(2) + "\n");
}

} // namespace omit::cli
