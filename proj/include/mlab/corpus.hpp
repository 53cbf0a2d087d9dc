#pragma once

#include "mlab/norms.hpp"

#include <string>
#include <vector>

namespace mlab {

struct CorpusEntry {
  std::string name;
  FuncExpr f;
  MihlinGrid grid;
};

// Directory holding the shipped configs (MLAB_CONFIG_DIR overrides).
std::string config_dir();

std::vector<CorpusEntry> load_corpus(const std::string& path);
std::vector<CorpusEntry> default_corpus();

struct EmbeddingEntry {
  std::string name;
  double e_unif = 0.0;
  double mihlin_upper = 0.0;  // order alpha + 1 + eps
  double mihlin_lower = 0.0;  // order alpha - eps
  double r1 = 0.0;            // e_unif / mihlin_upper
  double r2 = 0.0;            // mihlin_lower / e_unif
  bool flagged = false;
  std::string note;
};

struct EmbeddingReport {
  double alpha = 0.0;
  double eps = 0.0;
  std::vector<EmbeddingEntry> entries;
  double max_r1 = 0.0, max_r2 = 0.0, median_r1 = 0.0, median_r2 = 0.0;
  nlohmann::json to_json() const;
};

EmbeddingReport embedding_ratios(const std::vector<CorpusEntry>& corpus, double alpha, double eps,
                                 const EUnifGrid& grid = {});

}  // namespace mlab
