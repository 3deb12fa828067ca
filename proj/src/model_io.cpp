#include <cstdio>
#include <fstream>
#include <sstream>

#include "maca/data_io.hpp"
#include "maca/errors.hpp"

namespace maca {

namespace {

using nlohmann::json;

constexpr std::string_view kModelSchema = "maca-tree";

std::string fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(h));
  return hex;
}

json params_to_json(const GAParams& p) {
  json seeds = json::array();
  for (const auto& rv : p.seed_candidates) seeds.push_back(rv.to_string());
  return {{"population_size", p.population_size},
          {"elite_fraction", p.elite_fraction},
          {"mutation_bit_rate", p.mutation_bit_rate},
          {"mutant_share", p.mutant_share},
          {"max_generations", p.max_generations},
          {"target_fitness", p.target_fitness},
          {"rng_seed", p.rng_seed},
          {"basin_penalty", p.basin_penalty},
          {"boundary", std::string(to_string(p.boundary))},
          {"max_steps", p.max_steps},
          {"trace_steps", p.trace_steps},
          {"seed_candidates", seeds}};
}

GAParams params_from_json(const json& j) {
  GAParams p;
  p.population_size = j.at("population_size").get<int>();
  p.elite_fraction = j.at("elite_fraction").get<double>();
  p.mutation_bit_rate = j.at("mutation_bit_rate").get<double>();
  p.mutant_share = j.at("mutant_share").get<double>();
  p.max_generations = j.at("max_generations").get<int>();
  p.target_fitness = j.at("target_fitness").get<double>();
  p.rng_seed = j.at("rng_seed").get<std::uint64_t>();
  p.basin_penalty = j.at("basin_penalty").get<double>();
  p.boundary = parse_boundary(j.at("boundary").get<std::string>());
  p.max_steps = j.at("max_steps").get<std::uint64_t>();
  p.trace_steps = j.at("trace_steps").get<int>();
  for (const auto& s : j.at("seed_candidates")) p.seed_candidates.push_back(RuleVector::parse(s.get<std::string>()));
  return p;
}

json tree_body(const MacaTree& tree) {
  json nodes = json::array();
  for (const auto& node : tree.nodes) {
    json routes = json::array();
    for (const auto& r : node.routes) {
      routes.push_back({{"attractor", r.attractor.to_string()}, {r.leaf ? "leaf" : "child", r.target}});
    }
    std::vector<int> rules(node.rules.codes().begin(), node.rules.codes().end());
    nodes.push_back({{"rules", rules}, {"default_label", node.default_label}, {"routes", routes}});
  }
  return {{"width", tree.width},
          {"classes", tree.classes},
          {"boundary", std::string(to_string(tree.boundary))},
          {"step_budget", tree.step_budget},
          {"max_depth", tree.max_depth == kUnlimitedDepth ? json(nullptr) : json(tree.max_depth)},
          {"default_label", tree.default_label},
          {"root_label", tree.root_label ? json(*tree.root_label) : json(nullptr)},
          {"nodes", nodes},
          {"build_params", params_to_json(tree.build_params)}};
}

MacaTree tree_from_body(const json& body) {
  MacaTree tree;
  tree.width = body.at("width").get<int>();
  tree.classes = body.at("classes").get<std::vector<std::string>>();
  tree.boundary = parse_boundary(body.at("boundary").get<std::string>());
  tree.step_budget = body.at("step_budget").get<std::uint64_t>();
  tree.max_depth = body.at("max_depth").is_null() ? kUnlimitedDepth : body.at("max_depth").get<int>();
  tree.default_label = body.at("default_label").get<int>();
  if (!body.at("root_label").is_null()) tree.root_label = body.at("root_label").get<int>();
  tree.build_params = params_from_json(body.at("build_params"));

  const int class_count = static_cast<int>(tree.classes.size());
  auto check_label = [&](int label) {
    if (label < 0 || label >= class_count) throw FormatError("class index out of range in model");
  };
  check_label(tree.default_label);
  if (tree.root_label) check_label(*tree.root_label);
  if (!tree.root_label && body.at("nodes").empty()) throw FormatError("model has no root node");

  const auto& nodes = body.at("nodes");
  for (const auto& n : nodes) {
    MacaNode node;
    node.rules = RuleVector::from_ints(n.at("rules").get<std::vector<int>>());
    if (node.rules.size() != tree.width) throw FormatError("node rule vector width mismatch");
    node.default_label = n.at("default_label").get<int>();
    check_label(node.default_label);
    for (const auto& r : n.at("routes")) {
      Route route;
      route.attractor = CAState::from_string(r.at("attractor").get<std::string>());
      if (route.attractor.width() != tree.width) throw FormatError("attractor width mismatch");
      if (r.contains("leaf")) {
        route.target = r.at("leaf").get<int>();
        check_label(route.target);
      } else {
        route.leaf = false;
        route.target = r.at("child").get<int>();
        // Children are always created after their parent.
        if (route.target <= static_cast<int>(tree.nodes.size()) ||
            route.target >= static_cast<int>(nodes.size())) {
          throw FormatError("child index out of range in model");
        }
      }
      if (!node.routes.empty() && !(node.routes.back().attractor < route.attractor)) {
        throw FormatError("routes are not sorted by attractor");
      }
      node.routes.push_back(route);
    }
    tree.nodes.push_back(std::move(node));
  }
  return tree;
}

}  // namespace

std::string serialize_model(const MacaTree& tree) {
  const json body = tree_body(tree);
  json doc = {{"schema", kModelSchema},
              {"version", kModelFormatVersion},
              {"checksum", fnv1a64(body.dump())},
              {"body", body}};
  return doc.dump(1) + "\n";
}

MacaTree parse_model(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw IntegrityError(std::string("model file is truncated or corrupt: ") + e.what());
  }
  try {
    if (!doc.is_object() || doc.value("schema", "") != kModelSchema) {
      throw FormatError("not a MACA tree model file");
    }
    const int version = doc.at("version").get<int>();
    if (version != kModelFormatVersion) {
      throw VersionError("model format version " + std::to_string(version) + " is not supported (expected " +
                         std::to_string(kModelFormatVersion) + ")");
    }
    const json& body = doc.at("body");
    if (fnv1a64(body.dump()) != doc.at("checksum").get<std::string>()) {
      throw IntegrityError("model checksum mismatch");
    }
    return tree_from_body(body);
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed model file: ") + e.what());
  } catch (const ParameterError& e) {
    throw FormatError(std::string("malformed model file: ") + e.what());
  } catch (const CapacityError& e) {
    throw FormatError(std::string("malformed model file: ") + e.what());
  }
}

void save_model(const MacaTree& tree, const std::filesystem::path& path) {
  atomic_write(path, serialize_model(tree));
}

MacaTree load_model(const std::filesystem::path& path) { return parse_model(read_text_file(path)); }

void atomic_write(const std::filesystem::path& path, std::string_view content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw LoadError("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) {
      std::filesystem::remove(tmp);
      throw LoadError("failed writing " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, path);
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace maca
