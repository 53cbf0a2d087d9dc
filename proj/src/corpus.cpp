#include "mlab/corpus.hpp"

#include "mlab/fit.hpp"

#include <cstdlib>
#include <fstream>

namespace mlab {

std::string config_dir() {
  if (const char* env = std::getenv("MLAB_CONFIG_DIR")) return env;
  return std::string(MLAB_SOURCE_DIR) + "/configs";
}

std::vector<CorpusEntry> load_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("corpus: cannot open " + path);
  const auto j = nlohmann::json::parse(in);
  std::vector<CorpusEntry> out;
  for (const auto& e : j.at("functions")) {
    CorpusEntry c{e.at("name").get<std::string>(), FuncExpr::constant(0.0), {}};
    if (e.contains("expr"))
      c.f = parse(e.at("expr").get<std::string>(), Domain::Positive);
    else
      c.f = FuncExpr::from_prefix(e.at("prefix").get<std::string>());
    if (e.contains("mihlin")) c.grid = MihlinGrid::from_json(e.at("mihlin"));
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<CorpusEntry> default_corpus() { return load_corpus(config_dir() + "/corpus.json"); }

nlohmann::json EmbeddingReport::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& e : entries)
    rows.push_back({{"name", e.name},
                    {"e_unif", e.e_unif},
                    {"mihlin_upper", e.mihlin_upper},
                    {"mihlin_lower", e.mihlin_lower},
                    {"r1", e.r1},
                    {"r2", e.r2},
                    {"flagged", e.flagged},
                    {"note", e.note}});
  return {{"alpha", alpha},       {"eps", eps},         {"entries", rows},        {"max_r1", max_r1},
          {"max_r2", max_r2},     {"median_r1", median_r1}, {"median_r2", median_r2}};
}

EmbeddingReport embedding_ratios(const std::vector<CorpusEntry>& corpus, double alpha, double eps, const EUnifGrid& grid) {
  if (!(eps > 0) || !(alpha > eps)) throw std::invalid_argument("embedding_ratios: need alpha > eps > 0");
  EmbeddingReport r{alpha, eps, {}, 0, 0, 0, 0};
  std::vector<double> r1s, r2s;
  for (const auto& c : corpus) {
    EmbeddingEntry e;
    e.name = c.name;
    try {
      e.e_unif = e_unif_norm(c.f, alpha, grid).value;
      const BandProfile mp = mihlin_profile(c.f, c.grid);
      e.mihlin_upper = aggregate(mp, NormKind::Mihlin, alpha + 1 + eps, BandWeight::Dyadic, Aggregate::Sum).value;
      e.mihlin_lower = aggregate(mp, NormKind::Mihlin, alpha - eps, BandWeight::Dyadic, Aggregate::Sum).value;
      if (!(e.e_unif > 0) || !(e.mihlin_upper > 0) || !std::isfinite(e.mihlin_upper)) throw std::runtime_error("degenerate norm");
      e.r1 = e.e_unif / e.mihlin_upper;
      e.r2 = e.mihlin_lower / e.e_unif;
      r1s.push_back(e.r1);
      r2s.push_back(e.r2);
      r.max_r1 = std::max(r.max_r1, e.r1);
      r.max_r2 = std::max(r.max_r2, e.r2);
    } catch (const std::exception& ex) {
      e.flagged = true;
      e.note = std::string("excluded: ") + ex.what();
    }
    r.entries.push_back(e);
  }
  if (!r1s.empty()) {
    r.median_r1 = median(r1s);
    r.median_r2 = median(r2s);
  }
  return r;
}

}  // namespace mlab
