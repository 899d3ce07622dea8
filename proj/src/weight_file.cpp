#include "xbar/weight_file.hpp"

#include <fstream>
#include <sstream>

#include "xbar/errors.hpp"

namespace xbar {

void WeightFile::validate() const {
    if (weights.rows < 1 || weights.cols < 1)
        throw ValidationError("weight file: dimensions must be positive");
    if (bits < 1 || bits > 62)
        throw ValidationError("weight file: bits must lie in [1, 62]");
    const long long lo = is_signed ? -(1LL << (bits - 1)) : 0;
    const long long hi = is_signed ? (1LL << (bits - 1)) - 1 : (1LL << bits) - 1;
    for (long long w : weights.v)
        if (w < lo || w > hi)
            throw ValidationError("weight file: value " + std::to_string(w) +
                                  " not representable in " + std::to_string(bits) + " bits");
}

WeightFile read_weight_stream(std::istream& in, const std::string& origin) {
    std::string magic, version;
    int rows = 0, cols = 0, bits = 0, signed_flag = -1;
    if (!(in >> magic >> version >> rows >> cols >> bits >> signed_flag))
        throw ValidationError(origin + ": malformed weight file header");
    if (magic != "XBW" || version != "v1")
        throw ValidationError(origin + ": expected 'XBW v1' header, got '" + magic + " " +
                              version + "'");
    if (rows < 1 || cols < 1)
        throw ValidationError(origin + ": header dimensions must be positive");
    if (signed_flag != 0 && signed_flag != 1)
        throw ValidationError(origin + ": signed flag must be 0 or 1");

    WeightFile wf;
    wf.bits = bits;
    wf.is_signed = signed_flag == 1;
    wf.weights = IntMatrix(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            if (!(in >> wf.weights.at(r, c)))
                throw ValidationError(origin + ": too few values (stopped at row " +
                                      std::to_string(r) + ", col " + std::to_string(c) + ")");

    long long extra;
    if (in >> extra)
        throw ValidationError(origin + ": trailing values beyond " + std::to_string(rows) +
                              "x" + std::to_string(cols));
    wf.validate();
    return wf;
}

WeightFile read_weight_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open weight file: " + path);
    return read_weight_stream(in, path);
}

void write_weight_stream(std::ostream& out, const WeightFile& wf) {
    wf.validate();
    out << "XBW v1 " << wf.weights.rows << ' ' << wf.weights.cols << ' ' << wf.bits << ' '
        << (wf.is_signed ? 1 : 0) << '\n';
    for (int r = 0; r < wf.weights.rows; ++r) {
        for (int c = 0; c < wf.weights.cols; ++c) {
            if (c) out << ' ';
            out << wf.weights.at(r, c);
        }
        out << '\n';
    }
}

void write_weight_file(const std::string& path, const WeightFile& wf) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot open weight file for writing: " + path);
    write_weight_stream(out, wf);
    if (!out) throw SimError("write failed: " + path);
}

}  // namespace xbar
