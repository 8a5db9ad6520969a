#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "amorph/amorph.h"

namespace {

struct SchemeDeleter {
    void operator()(amorph_scheme* s) const { amorph_scheme_free(s); }
};
using SchemePtr = std::unique_ptr<amorph_scheme, SchemeDeleter>;

struct Text {
    char* p = nullptr;
    ~Text() { amorph_string_free(p); }
    std::string str() const { return p ? p : ""; }
};

int exit_code(amorph_status st)
{
    switch (st) {
    case AMORPH_OK:
        return 0;
    case AMORPH_E_NO_FUSION:
    case AMORPH_E_VIOLATION:
        return 1;
    default:
        return 2;
    }
}

int report(amorph_status st)
{
    if (st != AMORPH_OK) {
        std::cerr << "error: " << amorph_last_error() << '\n';
    }
    return exit_code(st);
}

amorph_status load(const std::string& path, SchemePtr& out)
{
    amorph_scheme* s = nullptr;
    amorph_status st = amorph_scheme_load(path.c_str(), &s);
    out.reset(s);
    return st;
}

bool write_file(const std::string& path, const std::string& text)
{
    std::ofstream f(path, std::ios::binary);
    f << text;
    f.close();
    if (!f) {
        std::cerr << "error: cannot write " << path << '\n';
        return false;
    }
    return true;
}

std::vector<std::size_t> parse_sizes(const std::vector<std::string>& words)
{
    std::vector<std::size_t> out;
    for (const auto& w : words) {
        std::size_t pos = 0;
        unsigned long long x = std::stoull(w, &pos);
        if (pos != w.size()) {
            throw std::invalid_argument(w);
        }
        out.push_back(static_cast<std::size_t>(x));
    }
    return out;
}

template <typename F>
int with_scheme(const std::string& file, F&& body)
{
    SchemePtr s;
    if (auto st = load(file, s); st != AMORPH_OK) {
        return report(st);
    }
    return body(s.get());
}

int print_text(amorph_status st, const Text& t)
{
    if (st == AMORPH_OK || t.p) {
        std::cout << t.str();
    }
    return report(st);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Exact analysis of fusions of symmetric association schemes"};
    app.require_subcommand(1);
    int code = 0;

    std::string file;
    std::string out_path;
    bool flag = false;

    auto* validate = app.add_subcommand("validate", "check the scheme axioms");
    validate->add_option("FILE", file)->required();
    validate->callback([&] {
        code = with_scheme(file, [](amorph_scheme* s) {
            Text t;
            return print_text(amorph_validate_text(s, &t.p), t);
        });
    });

    auto* spectrum = app.add_subcommand("spectrum", "eigenmatrices and multiplicities");
    spectrum->add_option("FILE", file)->required();
    spectrum->add_flag("--json", flag, "JSON output");
    spectrum->callback([&] {
        code = with_scheme(file, [&](amorph_scheme* s) {
            Text t;
            return print_text(amorph_spectrum_text(s, flag, &t.p), t);
        });
    });

    std::string parts;
    auto* fuse = app.add_subcommand("fuse", "fuse relations by a partition");
    fuse->add_option("FILE", file)->required();
    fuse->add_option("--parts", parts, "partition of 1..d, e.g. 1,2|3")->required();
    fuse->add_option("-o,--output", out_path, "write the fused scheme here");
    fuse->callback([&] {
        code = with_scheme(file, [&](amorph_scheme* s) {
            amorph_scheme* fused = nullptr;
            Text summary;
            amorph_status st = amorph_fuse(s, parts.c_str(), &fused, &summary.p);
            SchemePtr keep(fused);
            if (st != AMORPH_OK) {
                return report(st);
            }
            std::cout << summary.str();
            if (!out_path.empty()) {
                return report(amorph_scheme_write(fused, out_path.c_str()));
            }
            return 0;
        });
    });

    auto* pairs = app.add_subcommand("pairs", "fusing pairs and their duals");
    pairs->add_option("FILE", file)->required();
    pairs->add_flag("--dual", flag, "pairs of idempotents");
    pairs->callback([&] {
        code = with_scheme(file, [&](amorph_scheme* s) {
            Text t;
            return print_text(amorph_pairs_text(s, flag, &t.p), t);
        });
    });

    std::string kind = "relations";
    std::string dot_path;
    auto* graph = app.add_subcommand("graph", "fusing-relations or fusing-idempotents graph");
    graph->add_option("FILE", file)->required();
    graph->add_option("--kind", kind)->check(CLI::IsMember({"relations", "idempotents"}));
    graph->add_option("--dot", dot_path, "also write DOT here");
    graph->callback([&] {
        code = with_scheme(file, [&](amorph_scheme* s) {
            const int ide = kind == "idempotents";
            Text t;
            if (int c = print_text(amorph_graph_text(s, ide, &t.p), t); c != 0) {
                return c;
            }
            if (!dot_path.empty()) {
                Text dot;
                if (auto st = amorph_graph_dot(s, ide, &dot.p); st != AMORPH_OK) {
                    return report(st);
                }
                return write_file(dot_path, dot.str()) ? 0 : 2;
            }
            return 0;
        });
    });

    auto* amorphic = app.add_subcommand("amorphic", "decide amorphicity");
    amorphic->add_option("FILE", file)->required();
    amorphic->add_flag("--oracle", flag, "cross-check against every partition");
    amorphic->callback([&] {
        code = with_scheme(file, [&](amorph_scheme* s) {
            Text t;
            return print_text(amorph_amorphic_text(s, flag, &t.p, nullptr), t);
        });
    });

    auto* classify = app.add_subcommand("classify", "strongly regular relations and idempotents");
    classify->add_option("FILE", file)->required();
    classify->callback([&] {
        code = with_scheme(file, [](amorph_scheme* s) {
            Text t;
            return print_text(amorph_classify_text(s, &t.p), t);
        });
    });

    std::vector<std::string> gen_args;
    auto* gen = app.add_subcommand("gen", "generate a scheme: complete n | wreath m FILE | chain n1,n2,... | "
                                          "latin n t | johnson3 n");
    gen->add_option("ARGS", gen_args)->required()->expected(2, 3);
    gen->add_option("-o,--output", out_path)->required();
    gen->callback([&] {
        const std::string what = gen_args[0];
        std::vector<std::string> rest(gen_args.begin() + 1, gen_args.end());
        SchemePtr inner;
        if (what == "wreath") {
            if (rest.size() != 2) {
                std::cerr << "error: usage: gen wreath m FILE -o OUT\n";
                code = 2;
                return;
            }
            if (auto st = load(rest[1], inner); st != AMORPH_OK) {
                code = report(st);
                return;
            }
            rest.pop_back();
        } else if (what == "chain" && rest.size() == 1) {
            std::vector<std::string> split;
            std::stringstream ss(rest[0]);
            for (std::string item; std::getline(ss, item, ',');) {
                split.push_back(item);
            }
            rest = split;
        }
        std::vector<std::size_t> params;
        try {
            params = parse_sizes(rest);
        } catch (const std::exception&) {
            std::cerr << "error: generator parameters must be non-negative integers\n";
            code = 2;
            return;
        }
        amorph_scheme* made = nullptr;
        amorph_status st = amorph_generate(what.c_str(), params.data(), params.size(), inner.get(), &made);
        SchemePtr keep(made);
        if (st != AMORPH_OK) {
            code = report(st);
            return;
        }
        code = report(amorph_scheme_write(made, out_path.c_str()));
    });

    std::string catalog;
    std::string report_path;
    unsigned workers = 0;
    auto* verify = app.add_subcommand("verify-paper", "audit the built-in catalog");
    verify->add_option("--catalog", catalog, "extra .scheme/.eigen files")->check(CLI::ExistingDirectory);
    verify->add_option("--report", report_path, "write the JSON report here");
    verify->add_option("--workers", workers, "threads (0 = all cores)");
    verify->callback([&] {
        Text json;
        Text summary;
        std::size_t violations = 0;
        amorph_status st = amorph_verify_paper(catalog.empty() ? nullptr : catalog.c_str(), workers, &json.p,
                                               &summary.p, &violations);
        std::cout << summary.str();
        if (!report_path.empty() && json.p && !write_file(report_path, json.str())) {
            code = 2;
            return;
        }
        code = report(st);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return code;
}
