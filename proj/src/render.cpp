#include "amorph/render.hpp"

#include <sstream>

#include "json.hpp"

#include "amorph/amorphic.hpp"
#include "amorph/fusegraph.hpp"
#include "amorph/srg.hpp"

namespace amorph {

namespace {

std::string matrix_text(const RatMatrix& m)
{
    std::vector<std::string> cells(m.rows() * m.cols());
    std::size_t width = 0;
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            cells[r * m.cols() + c] = m(r, c).str();
            width = std::max(width, cells[r * m.cols() + c].size());
        }
    }
    std::string out;
    for (std::size_t r = 0; r < m.rows(); ++r) {
        out += " ";
        for (std::size_t c = 0; c < m.cols(); ++c) {
            const std::string& x = cells[r * m.cols() + c];
            out += std::string(width + 1 - x.size(), ' ') + x;
        }
        out += '\n';
    }
    return out;
}

std::string label(const IndexSet& l)
{
    std::string s;
    for (std::size_t k = 0; k < l.size(); ++k) {
        s += (k ? "," : "") + std::to_string(l[k]);
    }
    return l.size() > 1 ? "{" + s + "}" : s;
}

std::string pair_text(std::pair<std::size_t, std::size_t> p)
{
    return "{" + std::to_string(p.first) + "," + std::to_string(p.second) + "}";
}

std::string yes_no(bool b)
{
    return b ? "yes" : "no";
}

std::string shape(const FusingGraph& g, const GraphProfile& p)
{
    const std::size_t n = g.order();
    if (p.is_path) {
        std::size_t start = 0;
        while (start < n && g.degree(start) > 1) {
            ++start;
        }
        std::string s = "path ";
        std::size_t prev = n;
        std::size_t cur = start;
        for (std::size_t step = 0; step < n; ++step) {
            s += (step ? "-" : "") + label(g.labels()[cur]);
            std::size_t next = n;
            for (std::size_t w = 0; w < n; ++w) {
                if (w != prev && g.adjacent(cur, w)) {
                    next = w;
                    break;
                }
            }
            prev = cur;
            cur = next;
            if (cur == n) {
                break;
            }
        }
        return s;
    }
    if (p.edge_count == n * (n - 1) / 2) {
        return "complete";
    }
    if (p.edge_count == 0) {
        return "empty";
    }
    return p.connected ? "connected" : "disconnected";
}

} // namespace

std::string render_validate(const Scheme& s)
{
    std::ostringstream out;
    out << (s.table ? "valid scheme" : "valid eigenmatrix") << ": v=" << s.spectral.v() << " d=" << s.d() << '\n';
    out << "valencies:";
    for (std::size_t i = 0; i <= s.d(); ++i) {
        out << ' ' << s.P()(0, i);
    }
    out << "\nmultiplicities:";
    for (const auto& m : s.spectral.multiplicities) {
        out << ' ' << m;
    }
    out << '\n';
    return out.str();
}

std::string render_spectrum(const Scheme& s, bool json)
{
    const SpectralData& sp = s.spectral;
    if (json) {
        auto mat = [](const RatMatrix& m) {
            nlohmann::ordered_json rows = nlohmann::ordered_json::array();
            for (std::size_t r = 0; r < m.rows(); ++r) {
                nlohmann::ordered_json row = nlohmann::ordered_json::array();
                for (std::size_t c = 0; c < m.cols(); ++c) {
                    row.push_back(m(r, c).str());
                }
                rows.push_back(std::move(row));
            }
            return rows;
        };
        nlohmann::ordered_json j;
        j["v"] = sp.v().get_str();
        j["d"] = s.d();
        j["P"] = mat(sp.P);
        j["Q"] = mat(sp.Q);
        nlohmann::ordered_json m = nlohmann::ordered_json::array();
        for (const auto& x : sp.multiplicities) {
            m.push_back(x.get_str());
        }
        j["multiplicities"] = std::move(m);
        nlohmann::ordered_json krein = nlohmann::ordered_json::array();
        const std::size_t n = s.d() + 1;
        for (std::size_t h = 0; h < n; ++h) {
            nlohmann::ordered_json block = nlohmann::ordered_json::array();
            for (std::size_t i = 0; i < n; ++i) {
                nlohmann::ordered_json row = nlohmann::ordered_json::array();
                for (std::size_t jj = 0; jj < n; ++jj) {
                    row.push_back(sp.q(h, i, jj).str());
                }
                block.push_back(std::move(row));
            }
            krein.push_back(std::move(block));
        }
        j["krein"] = std::move(krein);
        return j.dump(2) + "\n";
    }
    std::ostringstream out;
    out << "P:\n" << matrix_text(sp.P) << "Q:\n" << matrix_text(sp.Q) << "multiplicities:";
    for (const auto& m : sp.multiplicities) {
        out << ' ' << m;
    }
    out << '\n';
    return out.str();
}

FuseRender render_fuse(const Scheme& s, const IndexPartition& pi)
{
    FusionOutcome f = bm_check(s.P(), pi);
    FuseRender out{s.table ? Scheme::from_table(fuse_relations(*s.table, pi)) : Scheme::from_eigenmatrix(f.fused), ""};
    out.summary = "relations: " + f.pi.str() + "\nidempotents: " + f.rho.str() + "\nfused P:\n" + matrix_text(out.fused.P());
    return out;
}

std::string render_pairs(const Scheme& s, bool dual)
{
    auto pairs = fusing_pairs(dual ? s.Q() : s.P());
    std::string out;
    for (const auto& fp : pairs) {
        out += pair_text(fp.pair) + " <-> " + pair_text(fp.dual) + "\n";
    }
    out += std::to_string(pairs.size()) + (dual ? " fusing idempotent pairs\n" : " fusing relation pairs\n");
    return out;
}

std::string render_graph(const Scheme& s, bool idempotents)
{
    const FusingGraph g = fusing_graph(idempotents ? s.Q() : s.P());
    const GraphProfile p = graph_profile(g);
    std::string out = idempotents ? "fusing-idempotents graph\n" : "fusing-relations graph\n";
    out += "vertices:";
    for (const auto& l : g.labels()) {
        out += " " + label(l);
    }
    out += "\nedges:";
    for (auto [a, b] : g.edges()) {
        out += " " + label(g.labels()[a]) + "-" + label(g.labels()[b]);
    }
    out += "\nshape: " + shape(g, p) + "\n";
    out += "connected: " + yes_no(p.connected) + "\n";
    out += "max degree: " + std::to_string(p.max_degree) + "\n";
    out += "claw: " + yes_no(p.has_claw) + "\n";
    out += "hamiltonian: " + (p.hamiltonian ? yes_no(*p.hamiltonian) : std::string("unknown")) + "\n";
    return out;
}

std::string render_dot(const Scheme& s, bool idempotents)
{
    return to_dot(fusing_graph(idempotents ? s.Q() : s.P()), idempotents ? "idempotents" : "relations");
}

AmorphicRender render_amorphic(const Scheme& s, bool oracle)
{
    AmorphicRender out;
    CanonicalForm cf = canonical_check(s.P());
    out.amorphic = cf.amorphic;
    std::string detail;
    std::string extra;
    if (oracle) {
        OracleResult o = brute_force_amorphic(s.P());
        out.agree = o.amorphic == cf.amorphic;
        if (!out.agree) {
            out.text = "amorphic: disagreement (canonical " + yes_no(cf.amorphic) + ", oracle " + yes_no(o.amorphic) +
                       ")\n";
            return out;
        }
        detail = "canonical+oracle agree";
        extra = "partitions checked: " + std::to_string(o.partitions_checked) + "\n";
        if (o.first_failure) {
            extra += "first failing partition: " + o.first_failure->str() + "\n";
        }
    } else {
        detail = cf.amorphic ? "canonical form" : cf.reason;
    }
    out.text = "amorphic: " + yes_no(cf.amorphic) + " (" + detail + ")\n" + extra;
    if (cf.amorphic && s.d() >= 3) {
        auto sigma = self_duality_check(s.P(), s.Q());
        out.text += "self-dual: " + yes_no(sigma.has_value()) + "\n";
    }
    return out;
}

std::string render_classify(const Scheme& s)
{
    std::string out;
    const std::int64_t v = Rational(s.spectral.v()).to_int64();
    auto side = [&](const RatMatrix& M, SrKind kind, const char* name) {
        for (const auto& col : classify_columns(M, kind)) {
            out += std::string(name) + " " + std::to_string(col.index) + ": ";
            if (!col.strongly_regular) {
                out += "not strongly regular\n";
                continue;
            }
            auto [r, sm] = two_values(M, col.index);
            SrgParams p = make_srg_params(v, M(0, col.index).to_int64(), r, sm, kind);
            out += "(" + std::to_string(p.v) + "," + std::to_string(p.k) + "," + p.lambda.str() + "," + p.mu.str() +
                   ") eigenvalues " + r.str() + ", " + sm.str();
            if (col.tags.empty()) {
                out += "; no Latin square type";
            }
            for (const auto& t : col.tags) {
                out += "; " + t.str();
            }
            out += "\n";
        }
    };
    side(s.P(), SrKind::Relation, "relation");
    side(s.Q(), SrKind::Idempotent, "idempotent");
    return out;
}

} // namespace amorph
