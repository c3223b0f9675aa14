#pragma once

#include <string>

#include "json.hpp"
#include "kramers/asymptotics.hpp"
#include "kramers/landscape.hpp"
#include "kramers/oracle1d.hpp"
#include "kramers/sampler.hpp"
#include "kramers/spectral1d.hpp"
#include "kramers/topology.hpp"

namespace kramers {

using nlohmann::json;

json point_json(const Point& p, int dim);
json verdict_json(const Verdict& v, int dim);

json atlas_json(const LandscapeAtlas& atlas);
json saddles_json(const std::vector<SeparatingSaddle>& saddles, int dim);
json jmap_json(const JMap& jmap);
json report_json(const AssumptionReport& r, const Topology& topo);
json decomposition_json(const WellDecomposition& w);

json weights_json(const std::vector<ExitWeight>& weights, int dim);
json prediction_json(const ExitPrediction& p, int dim);
std::string weights_csv(const std::vector<ExitWeight>& weights, int dim);

json histogram_json(const ExitHistogram& h);
std::string histogram_csv(const ExitHistogram& h);
json independence_json(const IndependenceReport& r);
std::string records_csv(const SimResult& r, int dim);

json spectrum_json(const DirichletSpectrum& s, const SpectralExit& e);
std::string spectrum_dump_csv(const DirichletSpectrum& s);

json probabilities_json(const ExitProbabilities& p);

// plain decimal that round-trips a double
std::string csv_number(double v);

}  // namespace kramers
