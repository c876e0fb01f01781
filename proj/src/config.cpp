#include "varreg/config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "varreg/expr.hpp"

namespace varreg {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

[[noreturn]] void fail(int line, const std::string& msg) {
    throw ConfigError("config line " + std::to_string(line) + ": " + msg);
}

struct RawEntry {
    std::string value;
    int line = 0;
};

double parse_real(const std::string& v, int line, const std::string& key) {
    std::size_t used = 0;
    double out;
    try {
        out = std::stod(v, &used);
    } catch (const std::exception&) {
        fail(line, "key '" + key + "' expects a real number, got '" + v + "'");
    }
    if (used != v.size()) fail(line, "key '" + key + "' has trailing text in '" + v + "'");
    return out;
}

int parse_int(const std::string& v, int line, const std::string& key) {
    std::size_t used = 0;
    long out;
    try {
        out = std::stol(v, &used);
    } catch (const std::exception&) {
        fail(line, "key '" + key + "' expects an integer, got '" + v + "'");
    }
    if (used != v.size()) fail(line, "key '" + key + "' has trailing text in '" + v + "'");
    return static_cast<int>(out);
}

std::vector<std::string> split_ws(const std::string& v) {
    std::vector<std::string> out;
    std::istringstream in(v);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

void parse_bc_list(const std::string& v, int line, const std::string& key, int order,
                   std::map<int, double>& out) {
    for (const std::string& tok : split_ws(v)) {
        const std::size_t colon = tok.find(':');
        if (colon == std::string::npos)
            fail(line, "key '" + key + "' expects order:value pairs, got '" + tok + "'");
        const int k = parse_int(tok.substr(0, colon), line, key);
        const double val = parse_real(tok.substr(colon + 1), line, key);
        if (k < 0 || k > order)
            fail(line, "key '" + key + "': derivative order " + std::to_string(k) +
                           " out of range [0, " + std::to_string(order) + "]");
        if (out.count(k))
            fail(line, "key '" + key + "': duplicate derivative order " + std::to_string(k));
        out[k] = val;
    }
}

} // namespace

RunConfig parse_config(const std::string& text) {
    // pass 1: collect entries, catching duplicates with both line numbers
    std::map<std::string, RawEntry> entries;
    std::string section;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    static const std::map<std::string, std::vector<std::string>> known = {
        {"problem", {"order", "interval", "lagrangian"}},
        {"boundary", {"left", "right"}},
        {"discretization", {"degree", "panels", "nodes", "grid"}},
        {"solver", {"tol", "max_iter"}},
        {"mollify", {"widths", "box"}},
        {"output", {"directory", "formats"}},
    };
    while (std::getline(in, raw)) {
        ++line;
        const std::size_t hash = raw.find('#');
        std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']') fail(line, "malformed section header '" + s + "'");
            section = trim(s.substr(1, s.size() - 2));
            if (!known.count(section)) fail(line, "unknown section '" + section + "'");
            continue;
        }
        const std::size_t eq = s.find('=');
        if (eq == std::string::npos) fail(line, "expected key = value, got '" + s + "'");
        if (section.empty()) fail(line, "key outside any [section]");
        const std::string key = trim(s.substr(0, eq));
        std::string value = trim(s.substr(eq + 1));
        const auto& keys = known.at(section);
        if (std::find(keys.begin(), keys.end(), key) == keys.end())
            fail(line, "unknown key '" + key + "' in section [" + section + "]");
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
            value = value.substr(1, value.size() - 2);
        const std::string full = section + "." + key;
        auto prev = entries.find(full);
        if (prev != entries.end())
            fail(line, "duplicate key '" + full + "' (first defined at line " +
                           std::to_string(prev->second.line) + ")");
        entries[full] = {value, line};
    }

    // pass 2: typed extraction with validation
    RunConfig cfg;
    auto take = [&](const std::string& full) -> const RawEntry* {
        auto it = entries.find(full);
        return it == entries.end() ? nullptr : &it->second;
    };

    const RawEntry* e = take("problem.order");
    if (!e) throw ConfigError("config: missing mandatory key 'problem.order'");
    cfg.order = parse_int(e->value, e->line, "order");
    if (cfg.order < 1 || cfg.order > kMaxYIndex)
        fail(e->line, "order must be in [1, " + std::to_string(kMaxYIndex) + "]");

    e = take("problem.interval");
    if (!e) throw ConfigError("config: missing mandatory key 'problem.interval'");
    {
        auto toks = split_ws(e->value);
        if (toks.size() != 2) fail(e->line, "interval expects two reals 'a b'");
        cfg.a = parse_real(toks[0], e->line, "interval");
        cfg.b = parse_real(toks[1], e->line, "interval");
        if (!(cfg.a < cfg.b)) fail(e->line, "interval requires a < b");
    }

    e = take("problem.lagrangian");
    if (!e) throw ConfigError("config: missing mandatory key 'problem.lagrangian'");
    cfg.lagrangian = e->value;
    try {
        Expr f = parse(cfg.lagrangian);
        if (f.max_y_index() > cfg.order)
            fail(e->line, "lagrangian references y" + std::to_string(f.max_y_index()) +
                              " beyond order " + std::to_string(cfg.order));
    } catch (const ParseError& pe) {
        fail(e->line, std::string("lagrangian: ") + pe.what());
    }

    if ((e = take("boundary.left")))
        parse_bc_list(e->value, e->line, "left", cfg.order, cfg.left);
    if ((e = take("boundary.right")))
        parse_bc_list(e->value, e->line, "right", cfg.order, cfg.right);

    if ((e = take("discretization.degree"))) {
        cfg.degree = parse_int(e->value, e->line, "degree");
        if (cfg.degree < 1 || cfg.degree > 64) fail(e->line, "degree must be in [1, 64]");
    }
    if ((e = take("discretization.panels"))) {
        cfg.panels = parse_int(e->value, e->line, "panels");
        if (cfg.panels < 1 || cfg.panels > 4096) fail(e->line, "panels must be in [1, 4096]");
    }
    if ((e = take("discretization.nodes"))) {
        cfg.nodes = parse_int(e->value, e->line, "nodes");
        if (cfg.nodes < 2 || cfg.nodes > 64) fail(e->line, "nodes must be in [2, 64]");
    }
    if ((e = take("discretization.grid"))) {
        cfg.grid = parse_int(e->value, e->line, "grid");
        if (cfg.grid < 257 || cfg.grid % 2 == 0)
            fail(e->line, "grid must be odd and >= 257");
    }
    if ((e = take("solver.tol"))) {
        cfg.tol = parse_real(e->value, e->line, "tol");
        if (!(cfg.tol > 0.0)) fail(e->line, "tol must be > 0");
    }
    if ((e = take("solver.max_iter"))) {
        cfg.max_iter = parse_int(e->value, e->line, "max_iter");
        if (cfg.max_iter < 0) fail(e->line, "max_iter must be >= 0");
    }
    if ((e = take("mollify.widths"))) {
        cfg.widths.clear();
        for (const std::string& tok : split_ws(e->value))
            cfg.widths.push_back(parse_real(tok, e->line, "widths"));
        if (cfg.widths.empty()) fail(e->line, "widths must be non-empty");
        for (std::size_t i = 0; i < cfg.widths.size(); ++i) {
            if (cfg.widths[i] <= 0.0) fail(e->line, "widths must be positive");
            if (i > 0 && cfg.widths[i] >= cfg.widths[i - 1])
                fail(e->line, "widths must strictly decrease");
        }
    }
    if ((e = take("mollify.box"))) {
        auto toks = split_ws(e->value);
        if (toks.size() != 2) fail(e->line, "box expects two reals 'lo hi'");
        cfg.box_lo = parse_real(toks[0], e->line, "box");
        cfg.box_hi = parse_real(toks[1], e->line, "box");
        if (!(cfg.box_lo < cfg.box_hi)) fail(e->line, "box requires lo < hi");
    }
    if ((e = take("output.directory"))) cfg.directory = e->value;
    if ((e = take("output.formats"))) {
        cfg.formats = split_ws(e->value);
        for (const std::string& f : cfg.formats)
            if (f != "csv" && f != "svg")
                fail(e->line, "unknown output format '" + f + "' (csv or svg)");
    }
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

} // namespace varreg
