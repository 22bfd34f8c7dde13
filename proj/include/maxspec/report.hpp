#pragma once

#include <json.hpp>

#include "maxspec/blockform.hpp"
#include "maxspec/continuity.hpp"
#include "maxspec/estimators.hpp"
#include "maxspec/finite_spectral.hpp"
#include "maxspec/gallery.hpp"

namespace maxspec {

/// JSON forms of the public result types. Indices are written 1-based;
/// infinite values as "inf".
nlohmann::json to_json(const FiniteSpectrum& s);
nlohmann::json to_json(const BlockDecomposition& b, const std::vector<std::size_t>& level_permutation);
nlohmann::json to_json(const WindowLevels& w);
nlohmann::json to_json(const KnownValue& k);
nlohmann::json to_json(const SpectralEstimate& e);
nlohmann::json to_json(const EigenCandidate& c);
nlohmann::json to_json(const ApProbe& p);
nlohmann::json to_json(const PowerBoundReport& p);
nlohmann::json to_json(const IrreducibilityReport& r);
nlohmann::json to_json(const PerturbationReport& r);
nlohmann::json to_json(const KakutaniReport& r);
nlohmann::json to_json(const HolderReport& r);
nlohmann::json to_json(const LipschitzCounterexample& r);
nlohmann::json to_json(const SemicontinuityReport& r);
nlohmann::json gallery_json(const std::string& name, const GalleryEntry& g);

/// A finite double, or "inf" / "-inf" / "nan".
nlohmann::json number_json(double x);

}  // namespace maxspec
