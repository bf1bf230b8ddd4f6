#include "shclust/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace shclust {

std::string format_double(double value) {
  char buffer[32];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
  if (ec != std::errc()) throw algorithm_error("io-error", "number formatting failed");
  return std::string(buffer, ptr);
}

namespace {

void newick_node(const Dendrogram& tree, int node, double parent_height,
                 const std::vector<std::string>& leaf_names, std::string& out) {
  if (tree.is_leaf(node)) {
    out += leaf_names.empty() ? std::to_string(node + 1)
                              : leaf_names[static_cast<std::size_t>(node)];
  } else {
    const MergeRecord& m = tree.merge_of(node);
    out += '(';
    newick_node(tree, m.left, m.height, leaf_names, out);
    out += ',';
    newick_node(tree, m.right, m.height, leaf_names, out);
    out += ')';
  }
  const double length = parent_height - tree.height_of(node);
  out += ':';
  out += format_double(length);
}

}  // namespace

std::string to_newick(const Dendrogram& tree,
                      const std::vector<std::string>& leaf_names) {
  if (!leaf_names.empty() &&
      static_cast<int>(leaf_names.size()) != tree.n_leaves)
    throw algorithm_error("bad-data", "leaf name count does not match tree");
  std::string out;
  const int root = tree.root();
  if (tree.is_leaf(root)) {
    out += leaf_names.empty() ? std::to_string(root + 1)
                              : leaf_names[static_cast<std::size_t>(root)];
  } else {
    const MergeRecord& m = tree.merge_of(root);
    out += '(';
    newick_node(tree, m.left, m.height, leaf_names, out);
    out += ',';
    newick_node(tree, m.right, m.height, leaf_names, out);
    out += ')';
  }
  out += ";\n";
  return out;
}

Json dendrogram_to_json(const Dendrogram& tree) {
  Json doc;
  doc["schema"] = "shclust/dendrogram/v1";
  doc["n_leaves"] = tree.n_leaves;
  doc["linkage"] = to_string(tree.linkage);
  Json merges = Json::array();
  for (const MergeRecord& m : tree.merges) {
    Json rec;
    rec["left"] = m.left;
    rec["right"] = m.right;
    rec["height"] = m.height;
    rec["size"] = m.size;
    merges.push_back(std::move(rec));
  }
  doc["merges"] = std::move(merges);
  return doc;
}

Dendrogram dendrogram_from_json(const Json& doc) {
  if (doc.value("schema", "") != "shclust/dendrogram/v1")
    throw algorithm_error("parse-error", "unexpected dendrogram schema");
  Dendrogram tree;
  tree.n_leaves = doc.at("n_leaves").get<int>();
  tree.linkage = linkage_from_string(doc.at("linkage").get<std::string>());
  for (const Json& rec : doc.at("merges")) {
    MergeRecord m;
    m.left = rec.at("left").get<int>();
    m.right = rec.at("right").get<int>();
    m.height = rec.at("height").get<double>();
    m.size = rec.at("size").get<int>();
    tree.merges.push_back(m);
  }
  tree.validate();
  return tree;
}

Json trace_to_json(const SelectionTrace& trace, const std::string& stage) {
  Json doc;
  doc["schema"] = "shclust/selection-trace/v1";
  doc["stage"] = stage;
  Json points = Json::array();
  for (const ScatterPoint& pt : trace.points)
    points.push_back(Json{{"key", pt.key}, {"value", pt.value}});
  doc["points"] = std::move(points);
  Json steps = Json::array();
  for (const PruningStep& step : trace.pruning_steps) {
    Json entry;
    entry["discarded_keys"] = step.discarded_keys;
    Json remaining = Json::array();
    for (const ScatterPoint& pt : step.remaining)
      remaining.push_back(Json{{"key", pt.key}, {"value", pt.value}});
    entry["remaining"] = std::move(remaining);
    steps.push_back(std::move(entry));
  }
  doc["pruning_steps"] = std::move(steps);
  doc["chosen_key"] = trace.chosen_key;
  return doc;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw algorithm_error("io-error", "cannot write " + path);
  out << content;
  if (!out) throw algorithm_error("io-error", "write failed for " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw algorithm_error("io-error", "cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_json_file(const std::string& path, const Json& doc) {
  write_text_file(path, doc.dump(2) + "\n");
}

Json read_json_file(const std::string& path) {
  return Json::parse(read_text_file(path));
}

}  // namespace shclust
