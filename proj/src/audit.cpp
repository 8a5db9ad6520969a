#include "amorph/audit.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "amorph/amorphic.hpp"
#include "amorph/error.hpp"
#include "amorph/fusegraph.hpp"
#include "amorph/fusion.hpp"
#include "amorph/generators.hpp"
#include "amorph/srg.hpp"

namespace amorph {

using ojson = nlohmann::ordered_json;

namespace {

// Railway cross-checks use the v x v adjacency matrix directly up to this size.
constexpr std::size_t kDirectEigenspaceLimit = 64;

std::string join(const std::vector<std::size_t>& xs, const char* sep = ",")
{
    std::string s;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        s += (k ? sep : "") + std::to_string(xs[k]);
    }
    return s;
}

ojson matrix_json(const RatMatrix& m)
{
    ojson rows = ojson::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        ojson row = ojson::array();
        for (std::size_t c = 0; c < m.cols(); ++c) {
            row.push_back(m(r, c).str());
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

ojson profile_json(const FusingGraph& g, const GraphProfile& p)
{
    ojson edges = ojson::array();
    for (auto [a, b] : g.edges()) {
        edges.push_back(ojson::array({g.labels()[a][0], g.labels()[b][0]}));
    }
    ojson out;
    out["edges"] = std::move(edges);
    out["edgeCount"] = p.edge_count;
    out["connected"] = p.connected;
    out["isPath"] = p.is_path;
    out["maxDegree"] = p.max_degree;
    out["hasClaw"] = p.has_claw;
    out["hamiltonian"] = p.hamiltonian ? ojson(*p.hamiltonian) : ojson(nullptr);
    return out;
}

ojson tags_json(const std::vector<ColumnClass>& cols)
{
    ojson out = ojson::array();
    for (const auto& c : cols) {
        ojson entry;
        entry["index"] = c.index;
        entry["stronglyRegular"] = c.strongly_regular;
        ojson tags = ojson::array();
        for (const auto& t : c.tags) {
            tags.push_back(t.str());
        }
        entry["types"] = std::move(tags);
        out.push_back(std::move(entry));
    }
    return out;
}

class Checker {
public:
    void expect(bool ok, const std::string& what)
    {
        ++checks_;
        if (!ok) {
            violations_.push_back(what);
        }
    }

    // Runs a block whose checks throw on failure.
    template <typename F>
    void guard(const std::string& what, F&& body)
    {
        try {
            body();
        } catch (const std::exception& e) {
            ++checks_;
            violations_.push_back(what + ": " + e.what());
        }
    }

    std::size_t checks() const { return checks_; }
    const std::vector<std::string>& violations() const { return violations_; }

private:
    std::size_t checks_ = 0;
    std::vector<std::string> violations_;
};

// Restricted multiplicity of theta in A_i + A_j, from the eigenmatrix.
BigInt spectral_multiplicity(const SpectralData& s, std::size_t i, std::size_t j, const Rational& theta)
{
    BigInt total = 0;
    for (std::size_t l = 1; l < s.P.rows(); ++l) {
        if (s.P(l, i) + s.P(l, j) == theta) {
            total += s.multiplicities[l];
        }
    }
    return total;
}

// Same, from the rank of A_i + A_j - theta I on the full vertex set.
BigInt direct_multiplicity(const RelationTable& t, std::size_t i, std::size_t j, const Rational& theta,
                           const Rational& valency)
{
    const std::size_t v = t.v();
    RatMatrix A(v, v);
    for (std::size_t x = 0; x < v; ++x) {
        for (std::size_t y = 0; y < v; ++y) {
            if (t(x, y) == i || t(x, y) == j) {
                A(x, y) = 1;
            }
        }
        A(x, x) -= theta;
    }
    BigInt dim(static_cast<unsigned long>(v - rank(A)));
    if (theta == valency) {
        dim -= 1; // the all-ones vector belongs to E_0
    }
    return dim;
}

void check_structure(const Scheme& s, Checker& c)
{
    const SpectralData& sp = s.spectral;
    const std::size_t n = sp.P.rows();
    const Rational v(sp.v());
    c.expect(sp.P * sp.Q == RatMatrix::identity(n).scaled(v), "P Q != v I");
    BigInt msum = 0;
    bool positive = true;
    for (const auto& m : sp.multiplicities) {
        msum += m;
        positive = positive && m > 0;
    }
    c.expect(msum == sp.v(), "multiplicities do not sum to v");
    c.expect(positive, "a multiplicity is not positive");
    bool krein_ok = true;
    bool krein_sym = true;
    for (std::size_t h = 0; h < n; ++h) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                krein_ok = krein_ok && sp.q(h, i, j).sign() >= 0;
                krein_sym = krein_sym && sp.q(h, i, j) == sp.q(h, j, i);
            }
        }
    }
    c.expect(krein_ok, "negative Krein parameter");
    c.expect(krein_sym, "Krein parameters not symmetric");
    bool col0 = true;
    for (std::size_t l = 0; l < n; ++l) {
        col0 = col0 && sp.P(l, 0) == Rational(1) && sp.Q(l, 0) == Rational(1);
    }
    c.expect(col0, "column 0 of P or Q is not all ones");
    if (s.core) {
        bool row0 = true;
        for (std::size_t i = 0; i < n; ++i) {
            row0 = row0 && sp.P(0, i) == Rational(static_cast<long>(s.core->valency(i)));
        }
        c.expect(row0, "row 0 of P differs from the valencies");
    }
}

void check_pairs_and_contractions(const Scheme& s, Checker& c, ojson& out)
{
    const std::size_t d = s.d();
    auto primal = fusing_pairs(s.P());
    auto dual = fusing_pairs(s.Q());
    auto bij = pair_bijection_check(s.P(), s.Q());
    c.expect(!bij, "pair correspondence: " + bij.value_or(""));

    for (const auto& fp : primal) {
        auto back = try_fuse(s.Q(), IndexPartition::pair(d, fp.dual.first, fp.dual.second));
        c.expect(back && back->rho == IndexPartition::pair(d, fp.pair.first, fp.pair.second),
                 "duality round trip fails for relation pair {" + std::to_string(fp.pair.first) + "," +
                     std::to_string(fp.pair.second) + "}");
    }

    ojson corr = ojson::array();
    for (const auto& fp : primal) {
        corr.push_back(ojson::array({ojson::array({fp.pair.first, fp.pair.second}),
                                     ojson::array({fp.dual.first, fp.dual.second})}));
    }
    out["pairCorrespondence"] = std::move(corr);

    std::size_t strict = 0;
    auto contraction_checks = [&](const RatMatrix& M, const std::vector<FusingPair>& pairs, const char* side,
                                  bool use_table) {
        for (const auto& fp : pairs) {
            const auto [i, j] = fp.pair;
            c.guard(std::string("contraction ") + side, [&] {
                Lemma4Result r = use_table ? lemma4_check(*s.table, i, j) : lemma4_check(M, i, j);
                c.expect(r.pass, std::string("contraction (") + side + "): " + r.witness);
                strict += r.strict;
            });
        }
    };
    contraction_checks(s.P(), primal, "relations", s.table.has_value());
    contraction_checks(s.Q(), dual, "idempotents", false);
    out["strictContractions"] = strict;
}

void check_relations(const Scheme& s, const std::vector<ColumnClass>& cols, Checker& c, ojson& out)
{
    const SpectralData& sp = s.spectral;
    const std::int64_t v = Rational(sp.v()).to_int64();
    std::vector<std::size_t> sr;
    for (const auto& col : cols) {
        if (!col.strongly_regular) {
            continue;
        }
        sr.push_back(col.index);
        const std::int64_t k = sp.P(0, col.index).to_int64();
        auto [r, s_] = two_values(sp.P, col.index);
        for (const auto& tag : col.tags) {
            if (tag.type == SrgType::Conference) {
                continue;
            }
            c.guard("closure coherence", [&] {
                auto closure = same_type_closure(ClosureMode::Complement, tag);
                auto comp = classify_srg(v, v - 1 - k, Rational(-1) - s_, Rational(-1) - r);
                c.expect(std::find(comp.begin(), comp.end(), closure.tag) != comp.end(),
                         "complement of relation " + std::to_string(col.index) + " does not classify as " +
                             closure.tag.str());
            });
            c.guard("single-eigenvalue criterion", [&] {
                TypeTag derived = from_single_eigenvalue(SrKind::Relation, v, k, Rational(-tag.t));
                c.expect(derived.type == tag.type && derived.n == tag.n,
                         "single-eigenvalue criterion disagrees on relation " + std::to_string(col.index));
            });
        }
    }

    ojson railways = ojson::array();
    for (std::size_t x = 0; x < sr.size(); ++x) {
        for (std::size_t y = x + 1; y < sr.size(); ++y) {
            const std::size_t i = sr[x];
            const std::size_t j = sr[y];
            c.guard("railway {" + std::to_string(i) + "," + std::to_string(j) + "}", [&] {
                auto [a1, b1] = two_values(sp.P, i);
                auto [a2, b2] = two_values(sp.P, j);
                const Rational k1 = sp.P(0, i);
                const Rational k2 = sp.P(0, j);
                RailwayResult rw = railway(Rational(sp.v()), k1, a1, b1, k2, a2, b2);
                std::vector<Rational> values(rw.theta.begin(), rw.theta.end());
                for (std::size_t l = 1; l < sp.P.rows(); ++l) {
                    values.push_back(sp.P(l, i) + sp.P(l, j));
                }
                std::sort(values.begin(), values.end());
                values.erase(std::unique(values.begin(), values.end()), values.end());
                const bool direct = s.table && s.table->v() <= kDirectEigenspaceLimit;
                for (const auto& theta : values) {
                    Rational predicted = 0;
                    for (std::size_t q = 0; q < 4; ++q) {
                        if (rw.theta[q] == theta) {
                            predicted += rw.mult[q];
                        }
                    }
                    BigInt spectral = spectral_multiplicity(sp, i, j, theta);
                    c.expect(predicted == Rational(spectral),
                             "railway {" + std::to_string(i) + "," + std::to_string(j) + "} multiplicity of " +
                                 theta.str() + ": formula " + predicted.str() + ", spectrum " + spectral.get_str());
                    if (direct) {
                        BigInt actual = direct_multiplicity(*s.table, i, j, theta, k1 + k2);
                        c.expect(actual == spectral, "eigenspace dimension of " + theta.str() + " in A" +
                                                         std::to_string(i) + "+A" + std::to_string(j) +
                                                         " is " + actual.get_str());
                    }
                }
                ojson entry;
                entry["pair"] = ojson::array({i, j});
                ojson th = ojson::array();
                ojson mu = ojson::array();
                for (std::size_t q = 0; q < 4; ++q) {
                    th.push_back(rw.theta[q].str());
                    mu.push_back(rw.mult[q].str());
                }
                entry["theta"] = std::move(th);
                entry["mult"] = std::move(mu);
                entry["directEigenspaces"] = direct;
                railways.push_back(std::move(entry));
            });
        }
    }
    out["railway"] = std::move(railways);
}

void check_idempotents(const Scheme& s, const std::vector<ColumnClass>& cols, Checker& c, ojson& out)
{
    const SpectralData& sp = s.spectral;
    const std::size_t d = s.d();
    const Rational v(sp.v());
    std::vector<std::size_t> sr;
    for (const auto& col : cols) {
        if (col.strongly_regular) {
            sr.push_back(col.index);
        }
    }

    // Smith conditions on each strongly regular idempotent's 2-class fusion.
    for (auto j : sr) {
        c.guard("2-class fusion of idempotent " + std::to_string(j), [&] {
            IndexSet rest;
            for (std::size_t i = 1; i <= d; ++i) {
                if (i != j) {
                    rest.push_back(i);
                }
            }
            FusionOutcome f = bm_check(sp.Q, IndexPartition(d, {{j}, rest}));
            const RatMatrix& Q2 = f.fused;
            const RatMatrix P2 = inverse(Q2).scaled(v);
            const auto krein = krein_parameters(P2, Q2);
            const std::size_t e1 = f.pi.part_of(j) + 1;
            const std::size_t e2 = 3 - e1;
            auto q = [&](std::size_t h, std::size_t a, std::size_t b) { return krein[(h * 3 + a) * 3 + b]; };
            auto [a, b] = two_values(Q2, e1);
            SrIdempotent ide{v.to_int64(), Q2(0, e1).to_int64(), a, b};
            auto w = smith_check(ide, q(e1, e1, e1), q(e2, e1, e1));
            c.expect(!w, "idempotent " + std::to_string(j) + ": " + w.value_or(""));
            // Same values straight from the dual eigenvalues of the original Q.
            auto [a0, b0] = two_values(sp.Q, j);
            c.expect(a0 == a && b0 == b, "2-class fusion changed the dual eigenvalues of idempotent " +
                                             std::to_string(j));
        });
    }

    ojson duals = ojson::array();
    for (std::size_t x = 0; x < sr.size(); ++x) {
        for (std::size_t y = x + 1; y < sr.size(); ++y) {
            const std::size_t j1 = sr[x];
            const std::size_t j2 = sr[y];
            c.guard("dual railway {" + std::to_string(j1) + "," + std::to_string(j2) + "}", [&] {
                auto [a1, b1] = two_values(sp.Q, j1);
                auto [a2, b2] = two_values(sp.Q, j2);
                auto ell = dual_railway(v, sp.Q(0, j1), a1, b1, sp.Q(0, j2), a2, b2);
                DualRailwaySets sets = dual_railway_sets(sp.P, sp.Q, j1, j2);
                Rational sum = 0;
                std::size_t covered = 0;
                for (std::size_t q = 0; q < 4; ++q) {
                    c.expect(ell[q] == sets.valency_sums[q],
                             "dual railway {" + std::to_string(j1) + "," + std::to_string(j2) + "} l" +
                                 std::to_string(q + 1) + ": formula " + ell[q].str() + ", valency sum " +
                                 sets.valency_sums[q].str());
                    sum += ell[q];
                    covered += sets.sets[q].size();
                }
                c.expect(sum == v - 1 && covered == d, "dual railway sets do not tile the relations");
                ojson entry;
                entry["pair"] = ojson::array({j1, j2});
                ojson ls = ojson::array();
                for (const auto& l : ell) {
                    ls.push_back(l.str());
                }
                entry["ell"] = std::move(ls);
                duals.push_back(std::move(entry));
            });
        }
    }
    out["dualRailway"] = std::move(duals);
}

struct EntryResult {
    ojson json;
    std::size_t checks = 0;
    std::size_t violations = 0;
    bool error = false;
    std::size_t partition_checks = 0;
    std::size_t counterexamples = 0;
};

EntryResult audit_entry(const CatalogEntry& entry)
{
    EntryResult res;
    ojson& j = res.json;
    j["id"] = entry.id;
    j["source"] = entry.source;

    std::optional<Scheme> built;
    try {
        built = entry.build();
    } catch (const std::exception& e) {
        j["status"] = "error";
        j["error"] = e.what();
        res.error = true;
        return res;
    }
    const Scheme& s = *built;
    const std::size_t d = s.d();
    Checker c;
    std::vector<std::string> counterexamples;

    j["status"] = "ok";
    j["v"] = s.spectral.v().get_str();
    j["d"] = d;
    j["hasTable"] = s.table.has_value();
    j["P"] = matrix_json(s.P());
    {
        ojson m = ojson::array();
        for (const auto& x : s.spectral.multiplicities) {
            m.push_back(x.get_str());
        }
        j["multiplicities"] = std::move(m);
    }

    check_structure(s, c);
    if (entry.predicted_P) {
        c.expect(s.P() == *entry.predicted_P, "computed P differs from the closed form");
        j["matchesClosedForm"] = s.P() == *entry.predicted_P;
    }
    if (d <= 10) {
        auto wp = rowcol_check(s.P());
        auto wq = rowcol_check(s.Q());
        c.expect(!wp, "row/column property fails on P rows " + join(wp.value_or(std::vector<std::size_t>{})));
        c.expect(!wq, "row/column property fails on Q rows " + join(wq.value_or(std::vector<std::size_t>{})));
    }

    const FusingGraph gp = fusing_graph(s.P());
    const FusingGraph gq = fusing_graph(s.Q());
    const GraphProfile pp = graph_profile(gp);
    const GraphProfile pq = graph_profile(gq);
    c.expect(pp.has_claw == contains_claw_naive(gp), "claw test disagrees with naive search (relations)");
    c.expect(pq.has_claw == contains_claw_naive(gq), "claw test disagrees with naive search (idempotents)");
    j["graphs"] = {{"relations", profile_json(gp, pp)}, {"idempotents", profile_json(gq, pq)}};
    j["pairCounts"] = {{"relations", pp.edge_count}, {"idempotents", pq.edge_count}};

    c.guard("fusing pairs", [&] { check_pairs_and_contractions(s, c, j); });

    const auto rel_cols = classify_columns(s.P(), SrKind::Relation);
    const auto ide_cols = classify_columns(s.Q(), SrKind::Idempotent);
    j["relations"] = tags_json(rel_cols);
    j["idempotents"] = tags_json(ide_cols);
    c.guard("relations", [&] { check_relations(s, rel_cols, c, j); });
    c.guard("idempotents", [&] { check_idempotents(s, ide_cols, c, j); });

    c.guard("theorem audit", [&] {
        AmorphicVerdict verdict = theorem_audit(s.P(), s.Q());
        res.partition_checks = verdict.oracle_checks;
        ojson vj;
        vj["amorphic"] = verdict.amorphic();
        vj["canonical"] = verdict.canonical;
        vj["canonicalRows"] = verdict.canonical_rows;
        vj["oracle"] = verdict.oracle ? ojson(*verdict.oracle) : ojson("skipped");
        vj["oracleChecks"] = verdict.oracle_checks;
        vj["selfDual"] = verdict.self_dual ? ojson(*verdict.self_dual) : ojson(nullptr);
        ojson rows = ojson::array();
        for (const auto& row : verdict.per_theorem) {
            ojson r;
            r["name"] = row.name;
            r["applicable"] = row.applicable;
            r["hypothesis"] = row.hypothesis;
            r["conclusion"] = row.conclusion;
            r["consistent"] = row.consistent;
            r["counterexample"] = row.counterexample;
            rows.push_back(std::move(r));
            if (row.counterexample) {
                counterexamples.push_back(row.name);
                continue;
            }
            c.expect(row.consistent, "inconsistent implication: " + row.name);
        }
        vj["perTheorem"] = std::move(rows);
        j["verdicts"] = std::move(vj);
    });

    j["checks"] = c.checks();
    j["violations"] = c.violations();
    j["counterexamples"] = counterexamples;
    res.counterexamples = counterexamples.size();
    res.checks = c.checks();
    res.violations = c.violations().size();
    return res;
}

} // namespace

std::vector<CatalogEntry> default_catalog()
{
    std::vector<CatalogEntry> out;
    auto table_entry = [](std::string id, std::string source, std::function<RelationTable()> make) {
        return CatalogEntry{std::move(id), std::move(source),
                            [make = std::move(make)] { return Scheme::from_table(make()); }, std::nullopt};
    };

    for (std::size_t n = 2; n <= 5; ++n) {
        out.push_back(table_entry("complete-" + std::to_string(n), "complete(" + std::to_string(n) + ")",
                                  [n] { return gen::complete(n); }));
    }

    for (std::size_t len = 2; len <= 5; ++len) {
        for (std::size_t mask = 0; mask < (std::size_t{1} << len); ++mask) {
            std::vector<std::size_t> ns;
            std::size_t v = 1;
            for (std::size_t k = 0; k < len; ++k) {
                ns.push_back((mask >> (len - 1 - k)) & 1 ? 3 : 2);
                v *= ns.back();
            }
            if (v > 300) {
                continue;
            }
            gen::ChainScheme chain = gen::wreath_chain(ns);
            std::string tag;
            for (auto n : ns) {
                tag += (tag.empty() ? "" : "-") + std::to_string(n);
            }
            CatalogEntry e{"chain-" + tag, "wreath_chain(" + join(ns) + ")",
                           [table = chain.table] { return Scheme::from_table(table); }, chain.predicted_P};
            out.push_back(std::move(e));
        }
    }

    for (std::size_t m : {2, 3}) {
        out.push_back(table_entry("wreath-" + std::to_string(m) + "-latin-3-2",
                                  "wreath(" + std::to_string(m) + ", latin_scheme(3,2))",
                                  [m] { return gen::wreath(m, gen::latin_scheme(3, 2)); }));
    }
    out.push_back(table_entry("latin-3-2", "latin_scheme(3,2)", [] { return gen::latin_scheme(3, 2); }));
    for (std::size_t t = 2; t <= 5; ++t) {
        out.push_back(table_entry("latin-5-" + std::to_string(t), "latin_scheme(5," + std::to_string(t) + ")",
                                  [t] { return gen::latin_scheme(5, t); }));
    }
    out.push_back(table_entry("johnson3-7", "johnson3(7)", [] { return gen::johnson3(7); }));
    out.push_back(table_entry("wreath-2-rook-3", "wreath(2, fuse(latin_scheme(3,2), 1,2|3))", [] {
        return gen::wreath(2, fuse_relations(gen::latin_scheme(3, 2), IndexPartition::parse(3, "1,2|3")));
    }));
    return out;
}

std::vector<CatalogEntry> directory_catalog(const std::filesystem::path& dir)
{
    std::error_code ec;
    if (!std::filesystem::is_directory(dir, ec)) {
        throw Error(ErrorKind::IoError, "not a directory: " + dir.string());
    }
    std::vector<std::filesystem::path> files;
    for (const auto& item : std::filesystem::directory_iterator(dir)) {
        const auto ext = item.path().extension();
        if (item.is_regular_file() && (ext == ".scheme" || ext == ".eigen")) {
            files.push_back(item.path());
        }
    }
    std::sort(files.begin(), files.end());
    std::vector<CatalogEntry> out;
    for (const auto& path : files) {
        const bool eigen = path.extension() == ".eigen";
        out.push_back(CatalogEntry{
            "file-" + path.filename().string(), path.filename().string(),
            [path, eigen] {
                std::ifstream in(path);
                if (!in) {
                    throw Error(ErrorKind::IoError, "cannot read " + path.string());
                }
                std::stringstream buf;
                buf << in.rdbuf();
                return eigen ? Scheme::from_eigenmatrix(parse_eigen_text(buf.str()))
                             : Scheme::from_table(parse_scheme_text(buf.str()));
            },
            std::nullopt});
    }
    return out;
}

AuditReport verify_catalog(const std::vector<CatalogEntry>& entries, unsigned workers)
{
    if (workers == 0) {
        workers = std::max(1u, std::thread::hardware_concurrency());
    }
    std::vector<EntryResult> results(entries.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t k = next++; k < entries.size(); k = next++) {
            results[k] = audit_entry(entries[k]);
        }
    };
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 1; w < workers && w < entries.size(); ++w) {
            pool.emplace_back(work);
        }
        work();
    }

    AuditReport report;
    ojson schemes = ojson::array();
    for (auto& r : results) {
        report.total_checks += r.checks;
        report.violations += r.violations;
        report.errors += r.error;
        report.partition_checks += r.partition_checks;
        report.counterexamples += r.counterexamples;
        schemes.push_back(std::move(r.json));
    }
    report.schemes = entries.size();

    ojson root;
    root["reportVersion"] = 1;
    root["schemes"] = std::move(schemes);
    root["summary"] = {{"schemes", report.schemes},
                       {"totalChecks", report.total_checks},
                       {"violations", report.violations},
                       {"errors", report.errors},
                       {"partitionChecks", report.partition_checks},
                       {"counterexamples", report.counterexamples}};
    report.json = root.dump(2) + "\n";
    return report;
}

AuditReport verify_paper(const std::optional<std::filesystem::path>& dir, unsigned workers)
{
    auto entries = default_catalog();
    if (dir) {
        auto extra = directory_catalog(*dir);
        entries.insert(entries.end(), std::make_move_iterator(extra.begin()), std::make_move_iterator(extra.end()));
    }
    return verify_catalog(entries, workers);
}

} // namespace amorph
