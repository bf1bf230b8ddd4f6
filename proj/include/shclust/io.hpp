#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "shclust/hclust.hpp"
#include "shclust/selection.hpp"
#include "shclust/types.hpp"

namespace shclust {

using Json = nlohmann::ordered_json;

/// Shortest decimal form that parses back to the same double.
std::string format_double(double value);

/// Newick serialization with branch lengths (parent height minus child
/// height). Leaves are named 1..n unless names are supplied.
std::string to_newick(const Dendrogram& tree,
                      const std::vector<std::string>& leaf_names = {});

Json dendrogram_to_json(const Dendrogram& tree);
Dendrogram dendrogram_from_json(const Json& doc);

Json trace_to_json(const SelectionTrace& trace, const std::string& stage);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);
void write_json_file(const std::string& path, const Json& doc);
Json read_json_file(const std::string& path);

}  // namespace shclust
