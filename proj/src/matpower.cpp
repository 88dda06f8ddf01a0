#include "gridpf/matpower.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace gridpf {
namespace {

// Character cursor that tracks line/column for error reporting.
struct Cursor {
    std::string_view text;
    size_t pos = 0;
    int line = 1, col = 1;

    bool eof() const { return pos >= text.size(); }
    char peek() const { return text[pos]; }
    void advance() {
        if (text[pos] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
        ++pos;
    }
    void skip_noise() {
        while (!eof()) {
            char c = peek();
            if (c == '%') {
                while (!eof() && peek() != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(c)) ||
                       c == ',') {
                advance();
            } else {
                break;
            }
        }
    }
};

double parse_number(Cursor& cur) {
    cur.skip_noise();
    if (cur.eof()) throw ParseError("unexpected end of input", cur.line, cur.col);
    size_t start = cur.pos;
    int line = cur.line, col = cur.col;
    auto num_char = [](char c) {
        return std::isdigit(static_cast<unsigned char>(c)) || c == '+' ||
               c == '-' || c == '.' || c == 'e' || c == 'E';
    };
    while (!cur.eof() && num_char(cur.peek())) cur.advance();
    if (cur.pos == start)
        throw ParseError(std::string("expected a number, found '") +
                             cur.peek() + "'",
                         line, col);
    std::string token(cur.text.substr(start, cur.pos - start));
    char* end = nullptr;
    double value = std::strtod(token.c_str(), &end);
    if (end != token.c_str() + token.size())
        throw ParseError("malformed number '" + token + "'", line, col);
    return value;
}

struct Matrix {
    std::vector<std::vector<double>> rows;
    int line = 0;  // of the opening bracket
};

// Finds `mpc.<name> = [...];` and parses the numeric rows. Rows are
// separated by ';' or newlines.
bool parse_matrix(std::string_view text, const std::string& name, Matrix& out) {
    std::string needle = "mpc." + name;
    size_t at = 0;
    while (true) {
        at = text.find(needle, at);
        if (at == std::string_view::npos) return false;
        size_t after = at + needle.size();
        // reject longer identifiers sharing the prefix, e.g. mpc.buses
        if (after < text.size() &&
            (std::isalnum(static_cast<unsigned char>(text[after])) ||
             text[after] == '_')) {
            at = after;
            continue;
        }
        break;
    }
    Cursor cur{text, 0, 1, 1};
    while (cur.pos < at) cur.advance();
    while (cur.pos < at + needle.size()) cur.advance();
    cur.skip_noise();
    if (cur.eof() || cur.peek() != '=')
        throw ParseError("expected '=' after " + needle, cur.line, cur.col);
    cur.advance();
    cur.skip_noise();
    if (cur.eof() || cur.peek() != '[')
        throw ParseError("expected '[' after " + needle + " =", cur.line,
                         cur.col);
    out.line = cur.line;
    cur.advance();

    std::vector<double> row;
    auto flush_row = [&](int line, int col) {
        if (row.empty()) return;
        if (!out.rows.empty() && out.rows.back().size() != row.size())
            throw ParseError(name + " row has " + std::to_string(row.size()) +
                                 " columns, previous rows have " +
                                 std::to_string(out.rows.back().size()),
                             line, col);
        out.rows.push_back(std::move(row));
        row.clear();
    };
    while (true) {
        // detect row/matrix delimiters before consuming a number
        size_t scan = cur.pos;
        int sline = cur.line, scol = cur.col;
        bool newline_seen = false;
        while (scan < text.size()) {
            char c = text[scan];
            if (c == '%') {
                while (scan < text.size() && text[scan] != '\n') ++scan;
                continue;
            }
            if (c == '\n') newline_seen = true;
            if (std::isspace(static_cast<unsigned char>(c)) || c == ',') {
                ++scan;
                continue;
            }
            break;
        }
        if (scan >= text.size())
            throw ParseError("unterminated " + needle + " matrix", sline, scol);
        char c = text[scan];
        if (c == ';' || newline_seen) flush_row(cur.line, cur.col);
        if (c == ';') {
            while (cur.pos <= scan) cur.advance();
            continue;
        }
        if (c == ']') {
            flush_row(cur.line, cur.col);
            while (cur.pos <= scan) cur.advance();
            cur.skip_noise();
            if (!cur.eof() && cur.peek() == ';') cur.advance();
            return true;
        }
        row.push_back(parse_number(cur));
    }
}

double column(const std::vector<double>& row, size_t i, double fallback) {
    return i < row.size() ? row[i] : fallback;
}

}  // namespace

NetworkCase parse_matpower_case(std::string_view text, const std::string& name,
                                std::vector<std::string>* warnings) {
    NetworkCase nc;
    nc.name = name;

    const std::string base_key = "mpc.baseMVA";
    size_t at = text.find(base_key);
    if (at == std::string_view::npos)
        throw ParseError("missing mpc.baseMVA", 1, 1);
    {
        Cursor cur{text, 0, 1, 1};
        while (cur.pos < at + base_key.size()) cur.advance();
        cur.skip_noise();
        if (cur.eof() || cur.peek() != '=')
            throw ParseError("expected '=' after mpc.baseMVA", cur.line,
                             cur.col);
        cur.advance();
        nc.base_mva = parse_number(cur);
        if (!(nc.base_mva > 0.0))
            throw ParseError("baseMVA must be positive", cur.line, cur.col);
    }

    Matrix bus, gen, branch;
    if (!parse_matrix(text, "bus", bus))
        throw ParseError("missing mpc.bus matrix", 1, 1);
    if (!parse_matrix(text, "gen", gen))
        throw ParseError("missing mpc.gen matrix", 1, 1);
    if (!parse_matrix(text, "branch", branch))
        throw ParseError("missing mpc.branch matrix", 1, 1);

    if (warnings) {
        for (const char* extra : {"gencost", "bus_name", "dcline", "areas"}) {
            Matrix skipped;
            if (parse_matrix(text, extra, skipped))
                warnings->push_back(std::string("mpc.") + extra +
                                    " present but unused; skipped");
        }
    }

    for (const auto& r : bus.rows) {
        if (r.size() < 13)
            throw ParseError("bus row needs 13 columns, got " +
                                 std::to_string(r.size()),
                             bus.line, 1);
        BusRecord b;
        b.id = static_cast<int>(r[0]);
        b.matpower_type = static_cast<int>(r[1]);
        b.pd = r[2];
        b.qd = r[3];
        b.gs = r[4];
        b.bs = r[5];
        b.vm = r[7];
        b.va = r[8];
        b.base_kv = r[9];
        b.vmax = column(r, 11, 1.1);
        b.vmin = column(r, 12, 0.9);
        nc.buses.push_back(b);
    }
    for (const auto& r : gen.rows) {
        if (r.size() < 10)
            throw ParseError("gen row needs 10 columns, got " +
                                 std::to_string(r.size()),
                             gen.line, 1);
        GenRecord g;
        g.bus = static_cast<int>(r[0]);
        g.pg = r[1];
        g.qg = r[2];
        g.qmax = r[3];
        g.qmin = r[4];
        g.vg = r[5];
        g.status = r[7] > 0.0;
        g.pmax = r[8];
        g.pmin = r[9];
        nc.gens.push_back(g);
    }
    for (const auto& r : branch.rows) {
        if (r.size() < 11)
            throw ParseError("branch row needs 11 columns, got " +
                                 std::to_string(r.size()),
                             branch.line, 1);
        BranchRecord br;
        br.from_bus = static_cast<int>(r[0]);
        br.to_bus = static_cast<int>(r[1]);
        br.r = r[2];
        br.x = r[3];
        br.b_charge = r[4];
        br.tap = r[8];
        br.shift = r[9];
        br.status = r[10] > 0.0;
        nc.branches.push_back(br);
    }

    validate_case(nc);
    return nc;
}

NetworkCase load_matpower_file(const std::string& path,
                               std::vector<std::string>* warnings) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CaseError("cannot open case file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string name = path;
    if (auto slash = name.find_last_of('/'); slash != std::string::npos)
        name = name.substr(slash + 1);
    if (auto dot = name.find_last_of('.'); dot != std::string::npos)
        name = name.substr(0, dot);
    return parse_matpower_case(buf.str(), name, warnings);
}

}  // namespace gridpf
