// Writes the bundled desk-scale datasets: a preferential-attachment graph and
// a planted near-duplicate corpus with its labels.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "dothash/dedup.hpp"
#include "dothash/graph.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Generate the bundled synthetic datasets"};
  std::string dir = "data";
  std::size_t nodes = 500;
  std::size_t attach = 20;
  std::uint64_t graph_seed = 1;
  dothash::PlantedCorpusConfig corpus;
  app.add_option("-o,--out-dir", dir, "Output directory")->default_val("data");
  app.add_option("--nodes", nodes, "Graph nodes")->default_val(500);
  app.add_option("--attach", attach, "Edges added per new node")->default_val(20);
  app.add_option("--graph-seed", graph_seed, "Graph seed")->default_val(1);
  app.add_option("--docs", corpus.documents, "Corpus documents")->default_val(200);
  app.add_option("--pairs", corpus.duplicate_pairs, "Planted duplicate pairs")->default_val(50);
  app.add_option("--edit-rate", corpus.edit_rate, "Per-word edit probability")->default_val(0.1);
  app.add_option("--corpus-seed", corpus.seed, "Corpus seed")->default_val(7);
  CLI11_PARSE(app, argc, argv);

  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir + "/synthetic_ba500.edges");
    out << "# preferential attachment: nodes=" << nodes << " m=" << attach
        << " seed=" << graph_seed << '\n';
    dothash::write_edge_list(out, dothash::barabasi_albert(nodes, attach, graph_seed));
  }
  const auto planted = dothash::planted_corpus(corpus);
  {
    std::ofstream out(dir + "/planted_corpus.jsonl");
    dothash::write_corpus_jsonl(out, planted.documents);
  }
  {
    std::ofstream out(dir + "/planted_labels.csv");
    dothash::write_labels_csv(out, planted.duplicates);
  }
  std::cout << "wrote datasets to " << dir << '\n';
  return 0;
}
