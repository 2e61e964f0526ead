#include "spgsim/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace spgsim {
namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

bool parse_index(const std::string& tok, index_t& out) {
    const auto* first = tok.data();
    const auto* last = tok.data() + tok.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

bool parse_value(const std::string& tok, double& out) {
    const auto* first = tok.data();
    const auto* last = tok.data() + tok.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

}  // namespace

CsrMatrix read_matrix_market(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    return read_matrix_market(in);
}

CsrMatrix read_matrix_market(std::istream& in) {
    std::string line;
    long lineno = 0;

    if (!std::getline(in, line)) throw ParseError("empty input", 1);
    ++lineno;
    std::istringstream hdr(line);
    std::string banner, object, format, field, symmetry;
    hdr >> banner >> object >> format >> field >> symmetry;
    if (banner != "%%MatrixMarket" || lower(object) != "matrix")
        throw ParseError("bad MatrixMarket banner", lineno);
    format = lower(format);
    field = lower(field);
    symmetry = lower(symmetry);
    if (format == "array") throw UnsupportedFormat("array (dense) format not supported");
    if (format != "coordinate") throw ParseError("unknown format '" + format + "'", lineno);
    const bool pattern = field == "pattern";
    if (!pattern && field != "real" && field != "integer")
        throw UnsupportedFormat("field '" + field + "' not supported");
    const bool symmetric = symmetry == "symmetric";
    if (!symmetric && symmetry != "general")
        throw UnsupportedFormat("symmetry '" + symmetry + "' not supported");

    // Size line: first non-comment, non-blank line after the banner.
    index_t nrows = 0, ncols = 0, nentries = 0;
    while (true) {
        if (!std::getline(in, line)) throw ParseError("missing size line", lineno + 1);
        ++lineno;
        if (line.empty() || line[0] == '%') continue;
        std::istringstream ls(line);
        std::string a, b, c, extra;
        ls >> a >> b >> c;
        if (!ls || (ls >> extra))
            throw ParseError("size line must be 'nrows ncols nnz'", lineno);
        if (!parse_index(a, nrows) || !parse_index(b, ncols) || !parse_index(c, nentries) ||
            nrows < 0 || ncols < 0 || nentries < 0)
            throw ParseError("invalid size line", lineno);
        break;
    }

    std::vector<Triplet> trips;
    trips.reserve(static_cast<std::size_t>(symmetric ? 2 * nentries : nentries));
    index_t seen = 0;
    while (seen < nentries) {
        if (!std::getline(in, line)) throw ParseError("unexpected end of file", lineno + 1);
        ++lineno;
        if (line.empty() || line[0] == '%') continue;
        std::istringstream ls(line);
        std::string a, b, c, extra;
        ls >> a >> b;
        index_t row = 0, col = 0;
        double val = 1.0;
        if (!ls || !parse_index(a, row) || !parse_index(b, col))
            throw ParseError("invalid coordinate entry", lineno);
        if (pattern) {
            if (ls >> extra) throw ParseError("pattern entry has a value", lineno);
        } else {
            ls >> c;
            if (!ls || !parse_value(c, val)) throw ParseError("invalid entry value", lineno);
            if (ls >> extra) throw ParseError("trailing tokens on entry", lineno);
        }
        if (row < 1 || row > nrows || col < 1 || col > ncols)
            throw ParseError("entry index out of bounds", lineno);
        trips.push_back({row - 1, col - 1, val});
        if (symmetric && row != col) trips.push_back({col - 1, row - 1, val});
        ++seen;
    }
    return from_triplets(nrows, ncols, std::move(trips));
}

void write_matrix_market(const CsrMatrix& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path + " for writing");
    write_matrix_market(m, out);
}

void write_matrix_market(const CsrMatrix& m, std::ostream& out) {
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << m.nrows << ' ' << m.ncols << ' ' << m.nnz() << '\n';
    char buf[64];
    for (index_t i = 0; i < m.nrows; ++i) {
        for (index_t t = m.rowptr[static_cast<std::size_t>(i)];
             t < m.rowptr[static_cast<std::size_t>(i) + 1]; ++t) {
            auto res = std::to_chars(buf, buf + sizeof(buf), m.values[static_cast<std::size_t>(t)]);
            out << (i + 1) << ' ' << (m.colind[static_cast<std::size_t>(t)] + 1) << ' ';
            out.write(buf, res.ptr - buf);
            out.put('\n');
        }
    }
}

}  // namespace spgsim
