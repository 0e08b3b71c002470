#pragma once

#include <string>

#include "json.hpp"
#include "qpr/rh.hpp"

namespace qpr {

using Json = nlohmann::json;

constexpr int kSchemaVersion = 1;

Json profile_to_json(const PrecisionProfile& p);
PrecisionProfile profile_from_json(const Json& j);

// payload encodings (coefficients as decimal strings)
Json bdr_payload(const BdrElement& a);
BdrElement bdr_from_payload(const std::shared_ptr<const BdrContext>& ctx, const Json& j);
Json cyclo_payload(const CycloElement& a);
CycloElement cyclo_from_payload(const std::shared_ptr<const CycloContext>& ctx, const Json& j);
Json toric_payload(const ToricElement& a);
ToricElement toric_from_payload(const std::shared_ptr<const BdrContext>& ctx, const Json& j);
Json bdr_mat_payload(const BdrMat& m);
BdrMat bdr_mat_from_payload(const std::shared_ptr<const BdrContext>& ctx, const Json& j);
Json toric_mat_payload(const ToricMat& m);
ToricMat toric_mat_from_payload(const std::shared_ptr<const BdrContext>& ctx, const Json& j);
Json cocycle_payload(const Cocycle& c);
Cocycle cocycle_from_payload(const std::shared_ptr<const BdrContext>& ctx, const Json& j);
Json connection_payload(const TConnection& n);
TConnection connection_from_payload(const std::shared_ptr<const BdrContext>& ctx, const Json& j);

/// Self-describing document: schema version, profile, type-tagged payload.
Json make_document(const PrecisionProfile& profile, Json payload);
/// Validates the version and rebuilds the context from the embedded profile.
std::pair<std::shared_ptr<const BdrContext>, Json> open_document(const Json& doc);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

} // namespace qpr
