#pragma once
// FBIN1 field file format: one UTF-8 JSON header line terminated by '\n',
// then raw little-endian IEEE-754 float64, component-major then row-major
// over grid points.

#include "bg/field.hpp"

#include <string>

namespace bg {

struct FbinRecord {
    std::string kind;      // "scalar" | "tensor" | "form"
    int rank_or_degree = 0;
    GridPtr grid;
    std::vector<double> data;
};

void write_fbin(const std::string& path, const std::string& kind,
                int rank_or_degree, const GridPtr& grid,
                const std::vector<double>& data);
FbinRecord read_fbin(const std::string& path);

void save_field(const std::string& path, const ScalarField& f);
void save_field(const std::string& path, const FormField& f);
void save_field(const std::string& path, const TensorField& f);

ScalarField load_scalar(const std::string& path);
FormField load_form(const std::string& path);

} // namespace bg
