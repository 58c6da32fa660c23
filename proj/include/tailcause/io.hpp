#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tailcause/evaluation.hpp"

namespace tailcause::io {

using json = nlohmann::ordered_json;

inline constexpr std::string_view kVersion = "0.3.0";

// Shortest decimal text that parses back to exactly `x`.
std::string format_double(double x);

// CSV: header row of column names, decimal floats, LF line endings, no index column.
Dataset read_csv(std::istream& in);
Dataset read_csv_file(const std::filesystem::path& path);
void write_csv(std::ostream& out, const Dataset& data);

json read_json_file(const std::filesystem::path& path);
// Pretty-printed with a trailing newline.
void write_json_file(const std::filesystem::path& path, const json& doc);

// {"version", "seed", "config"}; seed is null when the command has none.
json make_meta(std::optional<std::uint64_t> seed, json config);

// {"p", "names", "edges": [[parent, child, beta]...], "alpha", "mode", "noise", "hidden"}.
// A single "noise" object applies to every node; "noise_per_node" overrides it.
json scm_to_json(const Scm& scm);
Scm scm_from_json(const json& doc);

// {"kind", "names", "values": row-major with null diagonal, "k"?}.
json matrix_to_json(const CoefMatrix& coefs, std::optional<long> k = std::nullopt);
CoefMatrix matrix_from_json(const json& doc);

// A causal order over named nodes.
struct NamedOrder {
    std::vector<std::string> names;  // reference node order
    CausalOrder order;               // positions aligned with `names`
};

// {"names", "pi": 1-based ranks aligned with names, "pi_inverse": names by rank}.
json order_to_json(const NamedOrder& order);
NamedOrder order_from_json(const json& doc);

// Re-expresses a named order over the observed nodes of `truth`
// (ValidationError when the node sets differ).
CausalOrder order_for_truth(const NamedOrder& order, const Scm& truth);

json score_to_json(const OrderScore& score);

struct GridFile {
    SimGrid grid;
    std::optional<std::size_t> reps;
    std::optional<std::uint64_t> seed;
    std::optional<double> k_exponent;
    std::vector<Method> methods;
};

// {"n": [...], "p": [...], "alpha": [...], "settings": [...], optional "reps",
//  "seed", "k_exponent", "methods", "coefficient_law", "mode", "nonlinear_quantile"}.
GridFile grid_from_json(const json& doc);
json grid_to_json(const SimGrid& grid);

void write_benchmark_csv(std::ostream& out, const std::vector<BenchmarkRow>& rows);
void write_k_sensitivity_csv(std::ostream& out, const std::vector<KSensitivityRow>& rows);

}  // namespace tailcause::io
