#pragma once

#include <iosfwd>
#include <string>

#include "xbar/bitmatrix.hpp"

namespace xbar {

// Plain-text weight container. Header line:
//   XBW v1 <rows> <cols> <bits> <signed:0|1>
// followed by rows of whitespace-separated decimal integers, one matrix row
// per line. Every value must be representable in <bits> (two's complement
// when signed).
struct WeightFile {
    int bits = 1;
    bool is_signed = false;
    IntMatrix weights;

    void validate() const;
};

WeightFile read_weight_file(const std::string& path);
WeightFile read_weight_stream(std::istream& in, const std::string& origin);
void write_weight_file(const std::string& path, const WeightFile& wf);
void write_weight_stream(std::ostream& out, const WeightFile& wf);

}  // namespace xbar
