#include "amorph/amorph.h"

#include <cstring>
#include <fstream>
#include <sstream>

#include "amorph/audit.hpp"
#include "amorph/error.hpp"
#include "amorph/generators.hpp"
#include "amorph/render.hpp"

struct amorph_scheme {
    amorph::Scheme scheme;
};

namespace {

thread_local std::string last_error;

amorph_status status_of(amorph::ErrorKind kind)
{
    using amorph::ErrorKind;
    switch (kind) {
    case ErrorKind::ParseError:
        return AMORPH_E_PARSE;
    case ErrorKind::IoError:
        return AMORPH_E_IO;
    case ErrorKind::NoFusion:
        return AMORPH_E_NO_FUSION;
    case ErrorKind::DimensionMismatch:
    case ErrorKind::NotSymmetric:
    case ErrorKind::BadDiagonal:
    case ErrorKind::MissingClass:
    case ErrorKind::InconsistentTriple:
    case ErrorKind::InvalidEigenmatrix:
    case ErrorKind::SingularMatrix:
        return AMORPH_E_INVALID;
    case ErrorKind::NonIntegralSpectrum:
    case ErrorKind::NonMonicOrNonIntegral:
    case ErrorKind::TooManyClasses:
    case ErrorKind::TooLarge:
        return AMORPH_E_UNSUPPORTED;
    case ErrorKind::BadPartition:
    case ErrorKind::BadSize:
    case ErrorKind::NotPrime:
    case ErrorKind::BadT:
    case ErrorKind::InvalidSrgParams:
    case ErrorKind::DegenerateDenominator:
    case ErrorKind::TypeMismatch:
    case ErrorKind::HypothesisFails:
    case ErrorKind::NotAnEdge:
        return AMORPH_E_ARGUMENT;
    case ErrorKind::PropertyViolation:
    case ErrorKind::InternalMismatch:
        return AMORPH_E_VIOLATION;
    }
    return AMORPH_E_INTERNAL;
}

amorph_status fail(amorph_status st, std::string msg)
{
    last_error = std::move(msg);
    return st;
}

template <typename F>
amorph_status guarded(F&& body)
{
    last_error.clear();
    try {
        return body();
    } catch (const amorph::Error& e) {
        return fail(status_of(e.kind()), e.what());
    } catch (const std::bad_alloc&) {
        return fail(AMORPH_E_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(AMORPH_E_INTERNAL, e.what());
    }
}

char* dup(const std::string& s)
{
    char* p = static_cast<char*>(std::malloc(s.size() + 1));
    if (!p) {
        throw std::bad_alloc();
    }
    std::memcpy(p, s.c_str(), s.size() + 1);
    return p;
}

amorph_scheme* wrap(amorph::Scheme s)
{
    return new amorph_scheme{std::move(s)};
}

amorph::Scheme parse(const std::string& text, bool eigen)
{
    return eigen ? amorph::Scheme::from_eigenmatrix(amorph::parse_eigen_text(text))
                 : amorph::Scheme::from_table(amorph::parse_scheme_text(text));
}

#define AMORPH_REQUIRE(cond) \
    if (!(cond)) \
    return fail(AMORPH_E_ARGUMENT, "ArgumentError: null argument")

} // namespace

extern "C" {

const char* amorph_last_error(void)
{
    return last_error.c_str();
}

const char* amorph_status_name(amorph_status status)
{
    switch (status) {
    case AMORPH_OK:
        return "ok";
    case AMORPH_E_ARGUMENT:
        return "argument error";
    case AMORPH_E_PARSE:
        return "parse error";
    case AMORPH_E_IO:
        return "i/o error";
    case AMORPH_E_INVALID:
        return "invalid scheme";
    case AMORPH_E_UNSUPPORTED:
        return "unsupported input";
    case AMORPH_E_NO_FUSION:
        return "no fusion";
    case AMORPH_E_VIOLATION:
        return "property violation";
    case AMORPH_E_INTERNAL:
        return "internal error";
    }
    return "unknown";
}

void amorph_string_free(char* s)
{
    std::free(s);
}

amorph_status amorph_scheme_load(const char* path, amorph_scheme** out)
{
    AMORPH_REQUIRE(path && out);
    return guarded([&] {
        std::ifstream in(path);
        if (!in) {
            return fail(AMORPH_E_IO, std::string("IoError: cannot read ") + path);
        }
        std::stringstream buf;
        buf << in.rdbuf();
        const std::string p(path);
        const bool eigen = p.size() >= 6 && p.compare(p.size() - 6, 6, ".eigen") == 0;
        *out = wrap(parse(buf.str(), eigen));
        return AMORPH_OK;
    });
}

amorph_status amorph_scheme_parse(const char* text, int is_eigen, amorph_scheme** out)
{
    AMORPH_REQUIRE(text && out);
    return guarded([&] {
        *out = wrap(parse(text, is_eigen != 0));
        return AMORPH_OK;
    });
}

void amorph_scheme_free(amorph_scheme* s)
{
    delete s;
}

amorph_status amorph_scheme_info(const amorph_scheme* s, size_t* v, size_t* d, int* has_table)
{
    AMORPH_REQUIRE(s);
    return guarded([&] {
        if (v) {
            *v = static_cast<size_t>(amorph::Rational(s->scheme.spectral.v()).to_int64());
        }
        if (d) {
            *d = s->scheme.d();
        }
        if (has_table) {
            *has_table = s->scheme.table.has_value();
        }
        return AMORPH_OK;
    });
}

amorph_status amorph_scheme_to_text(const amorph_scheme* s, char** out)
{
    AMORPH_REQUIRE(s && out);
    return guarded([&] {
        *out = dup(s->scheme.table ? amorph::write_scheme_text(*s->scheme.table)
                                   : amorph::write_eigen_text(s->scheme.P()));
        return AMORPH_OK;
    });
}

amorph_status amorph_scheme_write(const amorph_scheme* s, const char* path)
{
    AMORPH_REQUIRE(s && path);
    return guarded([&] {
        std::ofstream f(path, std::ios::binary);
        f << (s->scheme.table ? amorph::write_scheme_text(*s->scheme.table) : amorph::write_eigen_text(s->scheme.P()));
        f.close();
        if (!f) {
            return fail(AMORPH_E_IO, std::string("IoError: cannot write ") + path);
        }
        return AMORPH_OK;
    });
}

amorph_status amorph_generate(const char* kind, const size_t* params, size_t nparams, const amorph_scheme* inner,
                              amorph_scheme** out)
{
    AMORPH_REQUIRE(kind && out && (params || nparams == 0));
    return guarded([&] {
        namespace gen = amorph::gen;
        const std::string k(kind);
        auto need = [&](size_t n) {
            if (nparams != n) {
                throw amorph::Error(amorph::ErrorKind::BadSize,
                                    k + " takes " + std::to_string(n) + " parameter" + (n == 1 ? "" : "s"));
            }
        };
        std::optional<amorph::RelationTable> table;
        if (k == "complete") {
            need(1);
            table = gen::complete(params[0]);
        } else if (k == "wreath") {
            need(1);
            if (!inner || !inner->scheme.table) {
                return fail(AMORPH_E_ARGUMENT, "ArgumentError: wreath needs an inner scheme with a relation table");
            }
            table = gen::wreath(params[0], *inner->scheme.table);
        } else if (k == "chain") {
            table = gen::wreath_chain(std::vector<std::size_t>(params, params + nparams)).table;
        } else if (k == "latin") {
            need(2);
            table = gen::latin_scheme(params[0], params[1]);
        } else if (k == "johnson3") {
            need(1);
            table = gen::johnson3(params[0]);
        } else {
            return fail(AMORPH_E_ARGUMENT, "ArgumentError: unknown generator " + k);
        }
        *out = wrap(amorph::Scheme::from_table(std::move(*table)));
        return AMORPH_OK;
    });
}

amorph_status amorph_fuse(const amorph_scheme* s, const char* parts, amorph_scheme** out, char** summary)
{
    AMORPH_REQUIRE(s && parts && out);
    return guarded([&] {
        auto pi = amorph::IndexPartition::parse(s->scheme.d(), parts);
        amorph::FuseRender r = amorph::render_fuse(s->scheme, pi);
        if (summary) {
            *summary = dup(r.summary);
        }
        *out = wrap(std::move(r.fused));
        return AMORPH_OK;
    });
}

#define AMORPH_TEXT_FN(name, expr) \
    amorph_status name \
    { \
        AMORPH_REQUIRE(s && out); \
        return guarded([&] { \
            *out = dup(expr); \
            return AMORPH_OK; \
        }); \
    }

AMORPH_TEXT_FN(amorph_validate_text(const amorph_scheme* s, char** out), amorph::render_validate(s->scheme))
AMORPH_TEXT_FN(amorph_spectrum_text(const amorph_scheme* s, int json, char** out),
               amorph::render_spectrum(s->scheme, json != 0))
AMORPH_TEXT_FN(amorph_pairs_text(const amorph_scheme* s, int dual, char** out),
               amorph::render_pairs(s->scheme, dual != 0))
AMORPH_TEXT_FN(amorph_graph_text(const amorph_scheme* s, int idempotents, char** out),
               amorph::render_graph(s->scheme, idempotents != 0))
AMORPH_TEXT_FN(amorph_graph_dot(const amorph_scheme* s, int idempotents, char** out),
               amorph::render_dot(s->scheme, idempotents != 0))
AMORPH_TEXT_FN(amorph_classify_text(const amorph_scheme* s, char** out), amorph::render_classify(s->scheme))

amorph_status amorph_amorphic_text(const amorph_scheme* s, int oracle, char** out, int* is_amorphic)
{
    AMORPH_REQUIRE(s && out);
    return guarded([&] {
        amorph::AmorphicRender r = amorph::render_amorphic(s->scheme, oracle != 0);
        *out = dup(r.text);
        if (is_amorphic) {
            *is_amorphic = r.amorphic;
        }
        if (!r.agree) {
            return fail(AMORPH_E_VIOLATION, "PropertyViolation: canonical form and oracle disagree");
        }
        return AMORPH_OK;
    });
}

amorph_status amorph_verify_paper(const char* catalog_dir, unsigned workers, char** report_json, char** summary,
                                  size_t* violations)
{
    return guarded([&] {
        std::optional<std::filesystem::path> dir;
        if (catalog_dir) {
            dir = catalog_dir;
        }
        amorph::AuditReport r = amorph::verify_paper(dir, workers);
        if (report_json) {
            *report_json = dup(r.json);
        }
        if (summary) {
            *summary = dup("schemes: " + std::to_string(r.schemes) + "\nchecks: " + std::to_string(r.total_checks) +
                           "\npartition checks: " + std::to_string(r.partition_checks) +
                           "\nerrors: " + std::to_string(r.errors) +
                           "\ncounterexamples: " + std::to_string(r.counterexamples) +
                           "\nviolations: " + std::to_string(r.violations) + "\n");
        }
        if (violations) {
            *violations = r.violations;
        }
        if (r.violations) {
            return fail(AMORPH_E_VIOLATION, "PropertyViolation: " + std::to_string(r.violations) + " violations");
        }
        return AMORPH_OK;
    });
}

} // extern "C"
