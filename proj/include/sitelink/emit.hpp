#pragma once

#include <cstdint>
#include <cstdio>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "error.hpp"
#include "generate.hpp"
#include "spectrum.hpp"
#include "system.hpp"
#include "version.hpp"

namespace sitelink {

// The full run configuration, recorded verbatim into every output so results
// can be reproduced bit for bit. Unset fields are omitted from the metadata.
struct RunConfig {
  std::string input;            // path, or "-" for stdin
  std::string format;           // fasta | raw
  std::string alphabet;         // resolved symbols
  std::string alphabet_source;  // declared | directive | inferred
  std::string links;            // all | lowest-frac=F | file=PATH
  std::optional<int> s;
  std::string method;  // closed_form | exact | monte_carlo
  std::optional<std::uint64_t> samples;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> subset_budget;
  std::string output_format;  // csv | json | raw | fasta
  std::string output_path;    // empty = stdout
  std::optional<double> purge_threshold;
  std::optional<int> purge_max_removals;
  std::optional<bool> purge_refresh;

  // Ordered key/value view of the set fields, version first.
  std::vector<std::pair<std::string, std::string>> entries() const;
};

// 17 significant digits: enough for a double to round-trip through text.
inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::vector<std::pair<std::string, std::string>> RunConfig::entries() const {
  std::vector<std::pair<std::string, std::string>> kv;
  kv.emplace_back("version", kVersion);
  if (!input.empty()) kv.emplace_back("input", input);
  if (!format.empty()) kv.emplace_back("format", format);
  if (!alphabet.empty()) kv.emplace_back("alphabet", alphabet);
  if (!alphabet_source.empty()) kv.emplace_back("alphabet_source", alphabet_source);
  if (!links.empty()) kv.emplace_back("links", links);
  if (s) kv.emplace_back("s", std::to_string(*s));
  if (!method.empty()) kv.emplace_back("method", method);
  if (samples) kv.emplace_back("samples", std::to_string(*samples));
  if (seed) kv.emplace_back("seed", std::to_string(*seed));
  if (subset_budget) kv.emplace_back("subset_budget", std::to_string(*subset_budget));
  if (!output_format.empty()) kv.emplace_back("output_format", output_format);
  if (!output_path.empty()) kv.emplace_back("output_path", output_path);
  if (purge_threshold) kv.emplace_back("purge_threshold", format_double(*purge_threshold));
  if (purge_max_removals) kv.emplace_back("purge_max_removals", std::to_string(*purge_max_removals));
  if (purge_refresh) kv.emplace_back("purge_refresh", *purge_refresh ? "true" : "false");
  return kv;
}

namespace detail {

inline void append_metadata_comments(std::string& out, const RunConfig& config) {
  for (const auto& [key, value] : config.entries()) {
    out += "# " + key + ": " + value + "\n";
  }
  out += "# units: nats\n";
  out += "# sites: 1-based\n";
}

inline nlohmann::ordered_json config_json(const RunConfig& config) {
  nlohmann::ordered_json j;
  for (const auto& [key, value] : config.entries()) j[key] = value;
  j["units"] = "nats";
  j["sites"] = "1-based";
  return j;
}

}  // namespace detail

// Spectrum CSV: one row per link in link-set order; site indices 1-based;
// samples/stderr/seed are empty unless the estimate is Monte Carlo.
inline std::string emit_spectrum_csv(std::span<const SpectrumEntry> entries,
                                     const RunConfig& config) {
  std::string out;
  detail::append_metadata_comments(out, config);
  out += "i,j,distance_nats,potential_nats,s,method,samples,stderr,seed\n";
  for (const auto& e : entries) {
    out += std::to_string(e.link.first + 1);
    out += ',';
    out += std::to_string(e.link.second + 1);
    out += ',';
    out += format_double(e.distance);
    out += ',';
    out += format_double(e.potential.value);
    out += ',';
    out += std::to_string(e.potential.s);
    out += ',';
    out += method_name(e.potential.method);
    if (e.potential.method == Method::monte_carlo) {
      out += ',';
      out += std::to_string(e.potential.samples);
      out += ',';
      out += format_double(e.potential.std_error);
      out += ',';
      out += std::to_string(e.potential.seed);
    } else {
      out += ",,,";
    }
    out += '\n';
  }
  return out;
}

// Link ranking CSV: i,j,distance_nats in link-set order.
inline std::string emit_links_csv(std::span<const Link> links, std::span<const double> distances,
                                  const RunConfig& config) {
  if (links.size() != distances.size()) {
    throw config_error("links and distances must have equal length");
  }
  std::string out;
  detail::append_metadata_comments(out, config);
  out += "i,j,distance_nats\n";
  for (std::size_t t = 0; t < links.size(); ++t) {
    out += std::to_string(links[t].first + 1);
    out += ',';
    out += std::to_string(links[t].second + 1);
    out += ',';
    out += format_double(distances[t]);
    out += '\n';
  }
  return out;
}

inline std::string emit_trace_json(const RemovalTrace& trace, const RunConfig& config) {
  nlohmann::ordered_json j;
  j["config"] = detail::config_json(config);
  j["steps"] = nlohmann::ordered_json::array();
  for (const auto& step : trace.steps) {
    nlohmann::ordered_json s;
    s["row_label"] = step.row_label;
    s["Q"] = step.q_drop;
    s["q_before"] = step.q_before;
    s["q_after"] = step.q_after;
    j["steps"].push_back(std::move(s));
  }
  j["stop_reason"] = stop_reason_name(trace.stop_reason);
  return j.dump(2) + "\n";
}

// Raw system emission: metadata comments (including the alphabet directive
// parse_input understands), then one row of symbols per line.
inline std::string emit_system_raw(const System& sys, const RunConfig& config) {
  std::string out;
  detail::append_metadata_comments(out, config);
  for (int r = 0; r < sys.rows(); ++r) {
    for (std::uint8_t c : sys.row(r)) out += sys.alphabet().symbol(c);
    out += '\n';
  }
  return out;
}

inline std::string emit_system_fasta(const System& sys) {
  std::string out;
  for (int r = 0; r < sys.rows(); ++r) {
    out += ">row_" + std::to_string(sys.row_label(r)) + "\n";
    for (std::uint8_t c : sys.row(r)) out += sys.alphabet().symbol(c);
    out += '\n';
  }
  return out;
}

// Synthetic spec JSON:
//   {"rows":100, "cols":99, "alphabet":"ACGU", "seed":7,
//    "blocks":[{"rows":85, "links":[{"i":3, "j":17, "bijection":"UGCA",
//                                    "noise":0.05}, ...]}, ...]}
// Site indices are 1-based; "bijection" maps alphabet[t] to bijection[t].
inline SyntheticSpec synthetic_spec_from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw config_error(std::string("invalid synthetic spec JSON: ") + e.what());
  }
  try {
    SyntheticSpec spec;
    spec.rows = j.at("rows").get<int>();
    spec.cols = j.at("cols").get<int>();
    spec.alphabet = Alphabet(j.at("alphabet").get<std::string>());
    spec.seed = j.value("seed", std::uint64_t{0});
    if (j.contains("blocks")) {
      for (const auto& jb : j.at("blocks")) {
        BlockSpec block;
        block.row_count = jb.at("rows").get<int>();
        for (const auto& jl : jb.value("links", nlohmann::json::array())) {
          PlantedLink link;
          link.i = jl.at("i").get<int>() - 1;
          link.j = jl.at("j").get<int>() - 1;
          link.noise_rate = jl.value("noise", 0.0);
          const auto image = jl.at("bijection").get<std::string>();
          if (static_cast<int>(image.size()) != spec.alphabet.size()) {
            throw config_error("bijection string must have one symbol per alphabet symbol");
          }
          for (char c : image) {
            const int code = spec.alphabet.code(c);
            if (code < 0) {
              throw config_error(std::string("bijection symbol '") + c +
                                 "' is not in the alphabet");
            }
            link.bijection.push_back(static_cast<std::uint8_t>(code));
          }
          block.links.push_back(std::move(link));
        }
        spec.blocks.push_back(std::move(block));
      }
    } else {
      spec.blocks.push_back(BlockSpec{.row_count = spec.rows, .links = {}});
    }
    validate(spec);
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw config_error(std::string("invalid synthetic spec JSON: ") + e.what());
  }
}

}  // namespace sitelink
