// JSON views of the domain types.  Every floating value is rounded to 15
// significant digits on the way out, so a dump / parse / dump cycle is
// stable.

#ifndef CONCENTRA_JSON_IO_HPP
#define CONCENTRA_JSON_IO_HPP

#include <cstdint>
#include <string>

#include "json.hpp"

#include "concentra/bounds.hpp"
#include "concentra/concentrator.hpp"
#include "concentra/discrete.hpp"
#include "concentra/rounding.hpp"
#include "concentra/trigpoly.hpp"

namespace concentra {

using Json = nlohmann::json;

/// x rounded to 15 significant digits; non-finite values become null.
Json num(double x);
double round15(double x);

Json to_json(const Spectrum& s);
Spectrum spectrum_from_json(const Json& j, std::int64_t degree_bound);
Json to_json(const CoeffPoly& p);

Json to_json(const SeriesEval& e);
Json to_json(const MinResult& m);
Json to_json(const Certificate& c);
Json to_json(const ConstantValue& c);
Json to_json(const GammaSharpLower& g);
Json to_json(const AsymptoteResult& a);

Json to_json(const ConcentrationReport& r);
Json to_json(const StarReport& r);
Json to_json(const DirichletTable& t);
Json to_json(const DecayRow& r);

Json to_json(const Hypotheses& h);
Json to_json(const RoundingTrial& t);
Json to_json(const MonteCarloReport& r);
Json to_json(const MomentReport& r);

Json to_json(const IntervalSet& e);
/// Accepts {"intervals": [[lo, hi], ...]}; throws DomainError otherwise.
IntervalSet interval_set_from_json(const Json& j);
Json to_json(const FractionResult& f);
Json to_json(const Plan& p);
Json to_json(const TorusReport& r);

}  // namespace concentra

#endif  // CONCENTRA_JSON_IO_HPP
