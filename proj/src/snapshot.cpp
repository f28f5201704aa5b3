#include "nsk/snapshot.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

#include <json.hpp>

namespace nsk {

static_assert(std::endian::native == std::endian::little,
              "snapshot IO assumes a little-endian host");

namespace {

constexpr char kMagic[8] = {'N', 'S', 'K', 'F', 'L', 'D', '0', '1'};

void write_doubles(std::ofstream& out, const cplx* data, std::size_t n) {
    out.write(reinterpret_cast<const char*>(data),
              static_cast<std::streamsize>(n * sizeof(cplx)));
}

}  // namespace

void write_snapshot(const std::string& path, const State& state) {
    const Grid& g = state.grid();
    nlohmann::json header;
    header["d"] = g.dim();
    header["n"] = nlohmann::json::array();
    header["L"] = nlohmann::json::array();
    for (int a = 0; a < g.dim(); ++a) {
        header["n"].push_back(g.n(a));
        header["L"].push_back(g.length(a));
    }
    header["t"] = state.t;
    std::vector<std::string> comps = {"a"};
    for (int j = 0; j < g.dim(); ++j) comps.push_back("m" + std::to_string(j + 1));
    header["components"] = comps;

    std::string hs = header.dump();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw SnapshotError("cannot open for writing: " + path);
    out.write(kMagic, 8);
    std::uint32_t len = static_cast<std::uint32_t>(hs.size());
    out.write(reinterpret_cast<const char*>(&len), 4);
    out.write(hs.data(), static_cast<std::streamsize>(hs.size()));
    write_doubles(out, state.a.c.data(), g.mode_count());
    for (int j = 0; j < g.dim(); ++j) write_doubles(out, state.m[j].c.data(), g.mode_count());
    if (!out) throw SnapshotError("write failed: " + path);
}

LoadedState read_snapshot(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SnapshotError("cannot open: " + path);
    char magic[8];
    in.read(magic, 8);
    if (!in || std::memcmp(magic, kMagic, 8) != 0)
        throw SnapshotError("bad magic in " + path);
    std::uint32_t len = 0;
    in.read(reinterpret_cast<char*>(&len), 4);
    if (!in || len == 0 || len > (1u << 24)) throw SnapshotError("bad header length");
    std::string hs(len, '\0');
    in.read(hs.data(), len);
    if (!in) throw SnapshotError("truncated header");

    nlohmann::json header = nlohmann::json::parse(hs, nullptr, false);
    if (header.is_discarded()) throw SnapshotError("header is not valid JSON");
    int d = header.at("d").get<int>();
    std::array<int, 3> n{1, 1, 1};
    std::array<double, 3> L{0, 0, 0};
    auto& jn = header.at("n");
    auto& jL = header.at("L");
    if (d < 1 || d > 3 || static_cast<int>(jn.size()) != d ||
        static_cast<int>(jL.size()) != d)
        throw SnapshotError("inconsistent header dimensions");
    for (int a = 0; a < d; ++a) {
        n[a] = jn[a].get<int>();
        L[a] = jL[a].get<double>();
    }
    auto comps = header.at("components").get<std::vector<std::string>>();
    if (static_cast<int>(comps.size()) != d + 1 || comps[0] != "a")
        throw SnapshotError("unexpected component list");

    LoadedState out;
    out.grid = std::make_shared<Grid>(d, n, L);
    out.state = State(*out.grid);
    out.state.t = header.at("t").get<double>();
    auto read_field = [&](SpectralField& f) {
        in.read(reinterpret_cast<char*>(f.c.data()),
                static_cast<std::streamsize>(f.c.size() * sizeof(cplx)));
        if (!in) throw SnapshotError("truncated coefficient data");
    };
    read_field(out.state.a);
    for (int j = 0; j < d; ++j) read_field(out.state.m[j]);
    return out;
}

}  // namespace nsk
