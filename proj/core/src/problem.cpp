#include "varsub/problem.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

#include "varsub/parse.hpp"

namespace varsub {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

bool valid_ident(const std::string& s) {
    if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
    return std::all_of(s.begin(), s.end(),
                       [](unsigned char c) { return std::isalnum(c) != 0; });
}

std::vector<std::string> split_list(const std::string& v, int line) {
    std::vector<std::string> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) throw ProblemError(line, "empty entry in list");
        if (!valid_ident(item)) throw ProblemError(line, "invalid name " + item);
        out.push_back(item);
    }
    if (out.empty()) throw ProblemError(line, "empty list");
    return out;
}

struct RawEntry {
    std::string key;
    std::string value;
    bool quoted = false;
    int line = 0;
};

// Quoted values keep their inner text verbatim; everything else is trimmed.
std::string unquote(const std::string& v, int line, bool& was_quoted) {
    was_quoted = false;
    if (v.size() >= 1 && v.front() == '"') {
        if (v.size() < 2 || v.back() != '"')
            throw ProblemError(line, "unterminated quoted value");
        was_quoted = true;
        return v.substr(1, v.size() - 2);
    }
    return v;
}

// Numeric keys take bare tokens; quoting is reserved for expressions and names.
void require_plain(const RawEntry& e) {
    if (e.quoted) throw ProblemError(e.line, e.key + " must not be quoted");
}

std::int64_t parse_int(const RawEntry& e, std::int64_t lo, std::int64_t hi) {
    require_plain(e);
    try {
        std::size_t pos = 0;
        long long v = std::stoll(e.value, &pos);
        if (pos != e.value.size()) throw std::invalid_argument("");
        if (v < lo || v > hi) throw std::out_of_range("");
        return v;
    } catch (const std::out_of_range&) {
        throw ProblemError(e.line, e.key + " out of range");
    } catch (const std::exception&) {
        throw ProblemError(e.line, e.key + " must be an integer");
    }
}

Expr parse_value_expr(const RawEntry& e, const ParseContext& ctx) {
    if (!e.quoted) throw ProblemError(e.line, e.key + " must be a quoted expression");
    try {
        return parse_expr(e.value, ctx);
    } catch (const ParseError& pe) {
        throw ProblemError(e.line, e.key + ": " + pe.what());
    }
}

Rational parse_rational_token(const std::string& tok, int line) {
    ParseContext ctx; // no fibers, no params: only numeric literals resolve
    try {
        auto r = parse_expr(tok, ctx).as_rational();
        if (!r) throw ProblemError(line, "catalog argument " + tok + " is not a rational number");
        return *r;
    } catch (const ParseError&) {
        throw ProblemError(line, "catalog argument " + tok + " is not a rational number");
    }
}

using Section = std::vector<RawEntry>;

const RawEntry* find_key(const Section& s, const std::string& key) {
    for (const auto& e : s)
        if (e.key == key) return &e;
    return nullptr;
}

void reject_duplicates(const Section& s) {
    std::set<std::string> seen;
    for (const auto& e : s)
        if (!seen.insert(e.key).second)
            throw ProblemError(e.line, "duplicate key " + e.key);
}

std::string format_double(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

bool space_eq(const JetSpace& a, const JetSpace& b) {
    return a.base == b.base && a.fibers == b.fibers && a.order == b.order;
}

} // namespace

OracleConfig Problem::oracle(OracleConfig base) const {
    if (oracle_seed) base.seed = *oracle_seed;
    if (oracle_samples) base.samples = *oracle_samples;
    if (oracle_tol) base.tol = *oracle_tol;
    return base;
}

bool operator==(const Problem& a, const Problem& b) {
    if (!space_eq(a.space, b.space) || a.params != b.params || a.kind != b.kind) return false;
    if (a.eps != b.eps || a.lagrangian != b.lagrangian || a.forces != b.forces) return false;
    if (a.embedding.has_value() != b.embedding.has_value()) return false;
    if (a.embedding) {
        if (!space_eq(a.embedding->source, b.embedding->source) ||
            !space_eq(a.embedding->target, b.embedding->target) ||
            a.embedding->components != b.embedding->components)
            return false;
    }
    if (a.topology != b.topology) return false;
    return a.oracle_seed == b.oracle_seed && a.oracle_samples == b.oracle_samples &&
           a.oracle_tol == b.oracle_tol;
}

Problem parse_problem(const std::string& text) {
    std::map<std::string, Section> sections;
    std::map<std::string, int> section_lines;
    {
        std::string current;
        std::istringstream in(text);
        std::string raw;
        int line = 0;
        while (std::getline(in, raw)) {
            ++line;
            // Strip comments outside quotes.
            bool in_quote = false;
            std::string stripped;
            for (char c : raw) {
                if (c == '"') in_quote = !in_quote;
                if (c == '#' && !in_quote) break;
                stripped.push_back(c);
            }
            std::string s = trim(stripped);
            if (s.empty()) continue;
            if (s.front() == '[') {
                if (s.back() != ']') throw ProblemError(line, "malformed section header");
                std::string name = trim(s.substr(1, s.size() - 2));
                if (name != "system" && name != "embedding" && name != "topology" &&
                    name != "oracle")
                    throw ProblemError(line, "unknown section [" + name + "]");
                if (sections.count(name))
                    throw ProblemError(line, "duplicate section [" + name + "]");
                sections[name];
                section_lines[name] = line;
                current = name;
                continue;
            }
            std::size_t eq = s.find('=');
            if (eq == std::string::npos)
                throw ProblemError(line, "expected key = value");
            if (current.empty())
                throw ProblemError(line, "entry outside any section");
            RawEntry e;
            e.key = trim(s.substr(0, eq));
            std::string v = trim(s.substr(eq + 1));
            e.value = unquote(v, line, e.quoted);
            e.line = line;
            if (e.key.empty()) throw ProblemError(line, "empty key");
            if (e.value.empty()) throw ProblemError(line, "empty value for " + e.key);
            sections[current].push_back(std::move(e));
        }
    }

    if (!sections.count("system")) throw ProblemError(1, "missing [system] section");

    Problem p;

    // --- [system] --------------------------------------------------------
    {
        const Section& sys = sections["system"];
        reject_duplicates(sys);
        p.space.base = "t";
        p.space.order = 2;
        if (const RawEntry* e = find_key(sys, "order"))
            p.space.order = static_cast<int>(parse_int(*e, 1, 16));
        if (const RawEntry* e = find_key(sys, "base")) {
            if (!valid_ident(e->value)) throw ProblemError(e->line, "invalid base name");
            p.space.base = e->value;
        }
        const RawEntry* fib = find_key(sys, "fibers");
        if (!fib) throw ProblemError(section_lines["system"], "missing fibers key");
        p.space.fibers = split_list(fib->value, fib->line);
        if (const RawEntry* e = find_key(sys, "params")) p.params = split_list(e->value, e->line);
        try {
            p.space.validate();
        } catch (const std::invalid_argument& ex) {
            throw ProblemError(fib->line, ex.what());
        }
        for (const std::string& prm : p.params)
            if (p.space.has_fiber(prm) || prm == p.space.base || prm == "pi")
                throw ProblemError(find_key(sys, "params")->line,
                                   "parameter " + prm + " collides with a coordinate");

        ParseContext ctx{p.space, {p.params.begin(), p.params.end()}};
        std::map<std::string, const RawEntry*> eps_entries, force_entries;
        const RawEntry* lag = nullptr;
        for (const auto& e : sys) {
            if (e.key.rfind("eps.", 0) == 0) {
                eps_entries[e.key.substr(4)] = &e;
            } else if (e.key.rfind("force.", 0) == 0) {
                force_entries[e.key.substr(6)] = &e;
            } else if (e.key == "lagrangian") {
                lag = &e;
            } else if (e.key != "order" && e.key != "base" && e.key != "fibers" &&
                       e.key != "params") {
                throw ProblemError(e.line, "unknown key " + e.key + " in [system]");
            }
        }
        int kinds = (!eps_entries.empty() ? 1 : 0) + (lag ? 1 : 0) + (!force_entries.empty() ? 1 : 0);
        if (kinds != 1)
            throw ProblemError(section_lines["system"],
                               "exactly one of eps.<fiber>, lagrangian, force.<fiber> is required");
        auto gather = [&](const std::map<std::string, const RawEntry*>& entries,
                          const char* what) {
            std::vector<Expr> out;
            for (const auto& [name, e] : entries)
                if (!p.space.has_fiber(name))
                    throw ProblemError(e->line, std::string(what) + "." + name +
                                                    " does not name a declared fiber");
            for (const std::string& f : p.space.fibers) {
                auto it = entries.find(f);
                if (it == entries.end())
                    throw ProblemError(section_lines["system"],
                                       std::string("missing ") + what + "." + f);
                out.push_back(parse_value_expr(*it->second, ctx));
            }
            return out;
        };
        if (!eps_entries.empty()) {
            p.kind = SystemKind::SourceForm;
            p.eps = gather(eps_entries, "eps");
        } else if (lag) {
            p.kind = SystemKind::Lagrangian;
            p.lagrangian = parse_value_expr(*lag, ctx);
        } else {
            p.kind = SystemKind::Forces;
            p.forces = gather(force_entries, "force");
        }
    }

    // --- [embedding] -----------------------------------------------------
    if (sections.count("embedding")) {
        const Section& emb = sections["embedding"];
        reject_duplicates(emb);
        int secline = section_lines["embedding"];
        const RawEntry* cat = find_key(emb, "catalog");
        const RawEntry* prm = find_key(emb, "params");
        if (cat && prm)
            throw ProblemError(cat->line, "catalog and params/map are mutually exclusive");
        if (cat) {
            for (const auto& e : emb)
                if (e.key != "catalog")
                    throw ProblemError(e.line, "unknown key " + e.key + " next to catalog");
            std::stringstream ss(cat->value);
            std::string name;
            ss >> name;
            std::vector<Rational> args;
            std::string tok;
            while (ss >> tok) args.push_back(parse_rational_token(tok, cat->line));
            try {
                p.embedding = make_catalog_embedding(name, args, p.space);
            } catch (const std::invalid_argument& ex) {
                throw ProblemError(cat->line, ex.what());
            }
        } else {
            if (!prm) throw ProblemError(secline, "missing params key (chart coordinates)");
            Embedding e;
            e.target = p.space;
            e.source.base = p.space.base;
            e.source.fibers = split_list(prm->value, prm->line);
            e.source.order = std::max(2, p.space.order);
            try {
                e.source.validate();
            } catch (const std::invalid_argument& ex) {
                throw ProblemError(prm->line, ex.what());
            }
            ParseContext ctx{e.source, {p.params.begin(), p.params.end()}};
            std::map<std::string, const RawEntry*> maps;
            for (const auto& en : emb) {
                if (en.key == "params") continue;
                if (en.key.rfind("map.", 0) != 0)
                    throw ProblemError(en.line, "unknown key " + en.key + " in [embedding]");
                std::string f = en.key.substr(4);
                if (!p.space.has_fiber(f))
                    throw ProblemError(en.line, "map." + f + " does not name a system fiber");
                maps[f] = &en;
            }
            for (const std::string& f : p.space.fibers) {
                auto it = maps.find(f);
                if (it == maps.end()) throw ProblemError(secline, "missing map." + f);
                Expr comp = parse_value_expr(*it->second, ctx);
                if (comp.max_jet_order() > 0)
                    throw ProblemError(it->second->line,
                                       "map." + f + " must not contain derivative coordinates");
                e.components.push_back(std::move(comp));
            }
            try {
                e.validate();
            } catch (const std::invalid_argument& ex) {
                throw ProblemError(secline, ex.what());
            }
            p.embedding = std::move(e);
        }
    }

    // --- [topology] ------------------------------------------------------
    if (sections.count("topology")) {
        const Section& topo = sections["topology"];
        reject_duplicates(topo);
        const RawEntry* nm = find_key(topo, "name");
        TopologyInfo info;
        if (nm) {
            for (const auto& e : topo)
                if (e.key != "name")
                    throw ProblemError(e.line, "name and raw Betti numbers are mutually exclusive");
            try {
                info = lookup_topology(nm->value);
            } catch (const std::invalid_argument& ex) {
                throw ProblemError(nm->line, ex.what());
            }
        } else {
            for (const auto& e : topo) {
                if (e.key == "betti1")
                    info.betti1 = static_cast<int>(parse_int(e, 0, 1 << 20));
                else if (e.key == "betti2")
                    info.betti2 = static_cast<int>(parse_int(e, 0, 1 << 20));
                else
                    throw ProblemError(e.line, "unknown key " + e.key + " in [topology]");
            }
        }
        p.topology = info;
    }

    // --- [oracle] --------------------------------------------------------
    if (sections.count("oracle")) {
        const Section& orc = sections["oracle"];
        reject_duplicates(orc);
        for (const auto& e : orc) {
            if (e.key == "seed") {
                require_plain(e);
                try {
                    std::size_t pos = 0;
                    p.oracle_seed = std::stoull(e.value, &pos);
                    if (pos != e.value.size()) throw std::invalid_argument("");
                } catch (const std::exception&) {
                    throw ProblemError(e.line, "seed must be an unsigned integer");
                }
            } else if (e.key == "samples") {
                p.oracle_samples = static_cast<int>(parse_int(e, 1, 1 << 20));
            } else if (e.key == "tol") {
                require_plain(e);
                try {
                    std::size_t pos = 0;
                    double v = std::stod(e.value, &pos);
                    if (pos != e.value.size() || !(v > 0)) throw std::invalid_argument("");
                    p.oracle_tol = v;
                } catch (const std::exception&) {
                    throw ProblemError(e.line, "tol must be a positive real");
                }
            } else {
                throw ProblemError(e.line, "unknown key " + e.key + " in [oracle]");
            }
        }
    }

    return p;
}

Problem load_problem(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_problem(buf.str());
}

std::string serialize_problem(const Problem& p) {
    std::ostringstream os;
    os << "[system]\n";
    os << "order = " << p.space.order << "\n";
    os << "base = " << p.space.base << "\n";
    os << "fibers = ";
    for (std::size_t i = 0; i < p.space.fibers.size(); ++i)
        os << (i ? ", " : "") << p.space.fibers[i];
    os << "\n";
    if (!p.params.empty()) {
        os << "params = ";
        for (std::size_t i = 0; i < p.params.size(); ++i) os << (i ? ", " : "") << p.params[i];
        os << "\n";
    }
    switch (p.kind) {
        case SystemKind::SourceForm:
            for (std::size_t i = 0; i < p.eps.size(); ++i)
                os << "eps." << p.space.fibers[i] << " = \"" << p.eps[i].str() << "\"\n";
            break;
        case SystemKind::Lagrangian:
            os << "lagrangian = \"" << p.lagrangian.str() << "\"\n";
            break;
        case SystemKind::Forces:
            for (std::size_t i = 0; i < p.forces.size(); ++i)
                os << "force." << p.space.fibers[i] << " = \"" << p.forces[i].str() << "\"\n";
            break;
    }
    if (p.embedding) {
        os << "\n[embedding]\n";
        os << "params = ";
        for (std::size_t i = 0; i < p.embedding->source.fibers.size(); ++i)
            os << (i ? ", " : "") << p.embedding->source.fibers[i];
        os << "\n";
        for (std::size_t i = 0; i < p.embedding->components.size(); ++i)
            os << "map." << p.embedding->target.fibers[i] << " = \""
               << p.embedding->components[i].str() << "\"\n";
    }
    if (p.topology) {
        os << "\n[topology]\n";
        if (!p.topology->name.empty()) {
            os << "name = \"" << p.topology->name << "\"\n";
        } else {
            if (p.topology->betti1) os << "betti1 = " << *p.topology->betti1 << "\n";
            if (p.topology->betti2) os << "betti2 = " << *p.topology->betti2 << "\n";
        }
    }
    if (p.oracle_seed || p.oracle_samples || p.oracle_tol) {
        os << "\n[oracle]\n";
        if (p.oracle_seed) os << "seed = " << *p.oracle_seed << "\n";
        if (p.oracle_samples) os << "samples = " << *p.oracle_samples << "\n";
        if (p.oracle_tol) os << "tol = " << format_double(*p.oracle_tol) << "\n";
    }
    return os.str();
}

SourceForm problem_source_form(const Problem& p) {
    switch (p.kind) {
        case SystemKind::SourceForm: {
            SourceForm sf{p.space, p.eps};
            sf.validate();
            return sf;
        }
        case SystemKind::Lagrangian:
            return euler_lagrange({p.space, p.lagrangian});
        case SystemKind::Forces: {
            SourceForm sf;
            sf.space = p.space.widened(2);
            for (int s = 0; s < sf.space.dim(); ++s)
                sf.components.push_back(
                    Expr::sub(Expr::sym(sf.space.jet(s, 2)), p.forces[s]));
            sf.validate();
            return sf;
        }
    }
    throw std::logic_error("unreachable");
}

} // namespace varsub
