#pragma once

#include "hessiso/norm.hpp"

#include <filesystem>
#include <string>

namespace hessiso {

/// Parse a norm description such as
///   {"kind": "randers", "alpha": [[1,0],[0,1]], "beta": [0.3, 0]}
///   {"kind": "profile", "k": 1, "n": 3, "f": {"cos": [1, 0, 0.1], "period": "2pi"}}
///   {"kind": "expression", "n": 2, "E": "(* 0.5 (+ (pow x1 2) (pow x2 2)))", "cone": [[1, 0]]}
///   {"kind": "glued", "base": {...profile...}, "dual_cone": [1.6, 2.6]}
/// Matrices are row-major nested arrays. Throws ParseError / InvalidSpec.
NormPtr parse_norm_json(const std::string& text);
NormPtr load_norm_file(const std::filesystem::path& path);

/// Inverse of parse_norm_json (Dual specs serialise through their base).
std::string norm_to_json(const NormSpec& spec, int indent = 2);

}  // namespace hessiso
