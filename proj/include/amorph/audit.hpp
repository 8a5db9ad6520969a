#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "amorph/exact.hpp"
#include "amorph/scheme.hpp"

namespace amorph {

/// One scheme to audit. The builder runs lazily (inside the worker) so that
/// construction and validation failures are recorded against the entry.
struct CatalogEntry {
    std::string id;
    std::string source;
    std::function<Scheme()> build;
    /// Closed-form P the computed spectrum must match exactly.
    std::optional<RatMatrix> predicted_P;
};

/// Complete schemes, all wreath chains over {2,3} of length 2..5 with v <= 300,
/// wreath products over the 3x3 grid scheme, affine-plane schemes, johnson3(7)
/// and a 3-class wreath product with a lone strongly regular relation.
std::vector<CatalogEntry> default_catalog();

/// `.scheme` and `.eigen` files in `dir`, sorted by file name.
std::vector<CatalogEntry> directory_catalog(const std::filesystem::path& dir);

struct AuditReport {
    std::string json; // pretty-printed, stable key order, trailing newline
    std::size_t schemes = 0;
    std::size_t total_checks = 0;
    std::size_t violations = 0;
    std::size_t errors = 0;
    std::size_t partition_checks = 0;
    /// Inconsistent implications where the statement itself fails; reported
    /// but not counted as violations.
    std::size_t counterexamples = 0;
};

/// Runs the full battery on every entry. `workers` = 0 picks the hardware
/// concurrency; the report does not depend on it.
AuditReport verify_catalog(const std::vector<CatalogEntry>& entries, unsigned workers = 0);

/// Default catalog plus any files in `dir`.
AuditReport verify_paper(const std::optional<std::filesystem::path>& dir, unsigned workers = 0);

} // namespace amorph
