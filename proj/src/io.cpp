#include "bg/io.hpp"

#include <json.hpp>

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace bg {

static_assert(std::endian::native == std::endian::little,
              "FBIN1 writer assumes a little-endian host");

void write_fbin(const std::string& path, const std::string& kind,
                int rank_or_degree, const GridPtr& grid,
                const std::vector<double>& data) {
    nlohmann::json hdr = {
        {"format", "FBIN1"},
        {"n", grid->n},
        {"sizes", grid->sizes},
        {"kind", kind},
        {"rank_or_degree", rank_or_degree},
        {"order", "lex"},
    };
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_fbin: cannot open " + path);
    out << hdr.dump() << '\n';
    out.write(reinterpret_cast<const char*>(data.data()),
              static_cast<std::streamsize>(data.size() * sizeof(double)));
    if (!out) throw std::runtime_error("write_fbin: write failed for " + path);
}

FbinRecord read_fbin(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_fbin: cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("read_fbin: missing header");
    nlohmann::json hdr = nlohmann::json::parse(line);
    if (hdr.at("format") != "FBIN1") throw std::runtime_error("read_fbin: bad magic");

    FbinRecord rec;
    rec.kind = hdr.at("kind");
    rec.rank_or_degree = hdr.at("rank_or_degree");
    rec.grid = TorusGrid::make(hdr.at("n"), hdr.at("sizes").get<std::vector<int>>());

    std::size_t ncomp = 1;
    if (rec.kind == "form") {
        ncomp = static_cast<std::size_t>(binom(rec.grid->n, rec.rank_or_degree));
    } else if (rec.kind == "tensor") {
        for (int i = 0; i < rec.rank_or_degree; ++i) ncomp *= rec.grid->n;
    } else if (rec.kind != "scalar") {
        throw std::runtime_error("read_fbin: unknown kind " + rec.kind);
    }
    rec.data.resize(ncomp * rec.grid->npts);
    in.read(reinterpret_cast<char*>(rec.data.data()),
            static_cast<std::streamsize>(rec.data.size() * sizeof(double)));
    if (static_cast<std::size_t>(in.gcount()) != rec.data.size() * sizeof(double))
        throw std::runtime_error("read_fbin: truncated payload in " + path);
    return rec;
}

void save_field(const std::string& path, const ScalarField& f) {
    write_fbin(path, "scalar", 0, f.grid, f.v);
}
void save_field(const std::string& path, const FormField& f) {
    write_fbin(path, "form", f.degree, f.grid, f.v);
}
void save_field(const std::string& path, const TensorField& f) {
    write_fbin(path, "tensor", f.rank, f.grid, f.v);
}

ScalarField load_scalar(const std::string& path) {
    FbinRecord rec = read_fbin(path);
    if (rec.kind != "scalar") throw std::runtime_error("load_scalar: kind mismatch");
    ScalarField f(rec.grid);
    f.v = std::move(rec.data);
    return f;
}

FormField load_form(const std::string& path) {
    FbinRecord rec = read_fbin(path);
    if (rec.kind != "form") throw std::runtime_error("load_form: kind mismatch");
    FormField f(rec.grid, rec.rank_or_degree);
    f.v = std::move(rec.data);
    return f;
}

} // namespace bg
