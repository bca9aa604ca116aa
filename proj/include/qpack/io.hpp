#pragma once

#include <cstring>
#include <fstream>
#include <sstream>

#include "qpack/design.hpp"
#include "qpack/incidence.hpp"

namespace qpack {

// File formats
//
//   blocks (integer-tuple) files:   header `# q=2 n=7 k=3`, then one block per
//     line as comma-separated decimal integers, e.g. `7,32,64`.
//   generator (matrix) files:       header `# q=2 n=7`, one row per line with
//     space-separated entries, generators separated by a blank line.
//   incidence matrix export:        header `# rows cols`, one row per line,
//     then two weight rows prefixed `#w` (column weights, then row weights).
//   solutions:                      0-1 string in column order, e.g. `001000001`.
//
// Additional `# note: ...` lines are preserved and surfaced by the CLI.

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BlockFile {
    std::uint32_t q = 0, n = 0, k = 0;
    std::vector<std::vector<std::uint64_t>> tuples;  // verbatim, not canonicalized
    std::vector<std::string> notes;

    std::vector<Subspace> decode() const {
        std::vector<Subspace> out;
        out.reserve(tuples.size());
        for (const auto& t : tuples) out.push_back(decode_tuple(t, n, FieldOrder(q)));
        return out;
    }

    Design to_design(std::uint32_t t) const { return Design::from_subspaces(t, decode()); }
};

struct GeneratorFile {
    GroupGens gens;
    std::vector<std::string> notes;
};

namespace detail {

inline std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline bool parse_header_kv(const std::string& line, const char* key, std::uint32_t& out) {
    auto pos = line.find(std::string(key) + "=");
    if (pos == std::string::npos) return false;
    out = static_cast<std::uint32_t>(std::stoul(line.substr(pos + std::strlen(key) + 1)));
    return true;
}

inline void scan_comment(const std::string& line, std::uint32_t& q, std::uint32_t& n,
                         std::uint32_t& k, std::vector<std::string>& notes) {
    if (line.rfind("# note:", 0) == 0) {
        notes.push_back(trim(line.substr(7)));
        return;
    }
    parse_header_kv(line, "q", q);
    parse_header_kv(line, "n", n);
    parse_header_kv(line, "k", k);
}

}  // namespace detail

inline BlockFile parse_blocks(std::istream& in, const std::string& origin = "<stream>") {
    BlockFile f;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = detail::trim(line);
        if (line.empty()) continue;
        if (line[0] == '#') {
            detail::scan_comment(line, f.q, f.n, f.k, f.notes);
            continue;
        }
        std::vector<std::uint64_t> tuple;
        std::stringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            tok = detail::trim(tok);
            try {
                tuple.push_back(std::stoull(tok));
            } catch (const std::exception&) {
                throw ParseError(origin + ":" + std::to_string(lineno) +
                                 ": bad integer '" + tok + "'");
            }
        }
        if (f.k == 0) f.k = static_cast<std::uint32_t>(tuple.size());
        if (tuple.size() != f.k)
            throw ParseError(origin + ":" + std::to_string(lineno) + ": expected " +
                             std::to_string(f.k) + " integers, got " +
                             std::to_string(tuple.size()));
        f.tuples.push_back(std::move(tuple));
    }
    if (f.q == 0 || f.n == 0)
        throw ParseError(origin + ": missing '# q=.. n=.. k=..' header");
    if (f.tuples.empty()) throw ParseError(origin + ": no blocks");
    return f;
}

inline BlockFile load_blocks(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path + ": cannot open");
    return parse_blocks(in, path);
}

inline void write_blocks(std::ostream& out, std::uint32_t q, std::uint32_t n, std::uint32_t k,
                         const std::vector<std::vector<std::uint64_t>>& tuples) {
    out << "# q=" << q << " n=" << n << " k=" << k << "\n";
    for (const auto& t : tuples) {
        for (std::size_t i = 0; i < t.size(); ++i) out << (i ? "," : "") << t[i];
        out << "\n";
    }
}

inline void write_design(std::ostream& out, const Design& d) {
    std::vector<std::vector<std::uint64_t>> tuples;
    tuples.reserve(d.size());
    for (std::size_t i = 0; i < d.size(); ++i)
        tuples.emplace_back(d.block(i), d.block(i) + d.k);
    write_blocks(out, d.q, d.n, d.k, tuples);
}

inline GeneratorFile parse_generators(std::istream& in, const std::string& origin = "<stream>") {
    std::uint32_t q = 0, n = 0, k_unused = 0;
    std::vector<std::string> notes;
    std::vector<std::vector<std::vector<std::uint8_t>>> mats;
    std::vector<std::vector<std::uint8_t>> cur;
    std::string line;
    std::size_t lineno = 0;
    auto flush = [&] {
        if (!cur.empty()) {
            mats.push_back(std::move(cur));
            cur.clear();
        }
    };
    while (std::getline(in, line)) {
        ++lineno;
        line = detail::trim(line);
        if (line.empty()) {
            flush();
            continue;
        }
        if (line[0] == '#') {
            detail::scan_comment(line, q, n, k_unused, notes);
            continue;
        }
        std::vector<std::uint8_t> row;
        std::stringstream ss(line);
        std::string tok;
        while (ss >> tok) {
            try {
                row.push_back(static_cast<std::uint8_t>(std::stoul(tok)));
            } catch (const std::exception&) {
                throw ParseError(origin + ":" + std::to_string(lineno) +
                                 ": bad entry '" + tok + "'");
            }
        }
        cur.push_back(std::move(row));
    }
    flush();
    if (q == 0 || n == 0) throw ParseError(origin + ": missing '# q=.. n=..' header");
    if (mats.empty()) throw ParseError(origin + ": no generator matrices");

    std::vector<FqMatrix> gens;
    for (const auto& rows : mats) {
        if (rows.size() != n)
            throw ParseError(origin + ": generator has " + std::to_string(rows.size()) +
                             " rows, expected " + std::to_string(n));
        std::vector<std::uint8_t> entries;
        entries.reserve(n * n);
        for (const auto& r : rows) {
            if (r.size() != n)
                throw ParseError(origin + ": generator row has " + std::to_string(r.size()) +
                                 " entries, expected " + std::to_string(n));
            entries.insert(entries.end(), r.begin(), r.end());
        }
        gens.emplace_back(FieldOrder(q), n, n, std::move(entries));
    }
    try {
        return GeneratorFile{GroupGens(FieldOrder(q), n, std::move(gens)), std::move(notes)};
    } catch (const std::invalid_argument& e) {
        throw ParseError(origin + ": " + e.what());
    }
}

inline GeneratorFile load_generators(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path + ": cannot open");
    return parse_generators(in, path);
}

inline void write_incidence_matrix(std::ostream& out, const IncidenceMatrix& m) {
    out << "# " << m.rows << " " << m.cols << "\n";
    for (std::size_t i = 0; i < m.rows; ++i) {
        for (std::size_t j = 0; j < m.cols; ++j) out << (j ? " " : "") << m.at(i, j);
        out << "\n";
    }
    out << "#w";
    for (auto w : m.col_weights) out << " " << w;
    out << "\n#w";
    for (auto w : m.row_weights) out << " " << w;
    out << "\n";
}

inline std::string solution_to_string(const Solution& s) {
    std::string out(s.selected.size(), '0');
    for (std::size_t i = 0; i < s.selected.size(); ++i)
        if (s.selected[i]) out[i] = '1';
    return out;
}

inline std::vector<std::uint8_t> parse_01_string(const std::string& s) {
    std::vector<std::uint8_t> out;
    out.reserve(s.size());
    for (char c : s) {
        if (c != '0' && c != '1') throw ParseError("solution string must be over {0,1}");
        out.push_back(c == '1');
    }
    return out;
}

}  // namespace qpack
