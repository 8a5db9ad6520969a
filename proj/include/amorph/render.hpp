#pragma once

#include <string>

#include "amorph/fusion.hpp"
#include "amorph/scheme.hpp"

namespace amorph {

// Text produced by the command-line front end. Each function throws the
// underlying amorph::Error unchanged.

std::string render_validate(const Scheme& s);

/// Plain text, or a JSON object {v, d, P, Q, multiplicities, krein} when `json`.
std::string render_spectrum(const Scheme& s, bool json);

/// Fused scheme (table or eigenmatrix input) plus a description of pi/rho.
struct FuseRender {
    Scheme fused;
    std::string summary;
};
FuseRender render_fuse(const Scheme& s, const IndexPartition& pi);

std::string render_pairs(const Scheme& s, bool dual);

std::string render_graph(const Scheme& s, bool idempotents);
std::string render_dot(const Scheme& s, bool idempotents);

struct AmorphicRender {
    std::string text;
    bool amorphic = false;
    bool agree = true; // false only if both deciders ran and disagree
};
AmorphicRender render_amorphic(const Scheme& s, bool oracle);

std::string render_classify(const Scheme& s);

} // namespace amorph
