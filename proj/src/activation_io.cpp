/*
 Copyright 2026 slotlab developers
 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      http://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "slotlab/features.hpp"

namespace slotlab::features {

namespace {

void put_f32le(std::string& out, float v) {
  const auto bits = std::bit_cast<std::uint32_t>(v);
  out.push_back(static_cast<char>(bits & 0xFF));
  out.push_back(static_cast<char>((bits >> 8) & 0xFF));
  out.push_back(static_cast<char>((bits >> 16) & 0xFF));
  out.push_back(static_cast<char>((bits >> 24) & 0xFF));
}

float get_f32le(const char* p) {
  const auto b = [p](int i) {
    return static_cast<std::uint32_t>(static_cast<unsigned char>(p[i]));
  };
  const std::uint32_t bits = b(0) | (b(1) << 8) | (b(2) << 16) | (b(3) << 24);
  return std::bit_cast<float>(bits);
}

// Shortest representation that parses back to the identical float32.
std::string f32_to_string(float v) {
  char buf[48];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

float f32_from_string(std::string_view token, const std::string& where) {
  float v = 0.0f;
  const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
  require(res.ec == std::errc() && res.ptr == token.data() + token.size(),
          Status::FormatError, "bad float in " + where + ": " + std::string(token));
  return v;
}

}  // namespace

void save_activations(const ActivationDataset& ds,
                      const std::filesystem::path& path) {
  ds.validate();
  nlohmann::json meta;
  meta["layer"] = ds.layer;
  meta["n_features"] = ds.n_features;
  meta["n_trials"] = ds.n_trials;
  meta["dtype"] = "f32le";
  meta["order"] = "row-major";
  auto labels = nlohmann::json::array();
  for (Label l : ds.labels) labels.push_back(to_string(l));
  meta["labels"] = std::move(labels);
  auto ids = nlohmann::json::array();
  for (const auto& id : ds.trial_ids) ids.push_back(id);
  meta["trial_ids"] = std::move(ids);

  std::string payload;
  payload.reserve(ds.values.size() * 4);
  for (float v : ds.values) put_f32le(payload, v);

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(out.good(), Status::IoError, "cannot write " + path.string());
  out << meta.dump() << '\n';
  out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
  require(out.good(), Status::IoError, "short write to " + path.string());
}

ActivationDataset load_activations(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), Status::IoError, "cannot open " + path.string());
  std::string header;
  require(static_cast<bool>(std::getline(in, header)), Status::FormatError,
          "missing metadata line in " + path.string());

  nlohmann::json meta;
  try {
    meta = nlohmann::json::parse(header);
  } catch (const nlohmann::json::exception& e) {
    raise(Status::FormatError,
          "bad metadata line in " + path.string() + ": " + e.what());
  }
  require(meta.value("dtype", "") == "f32le", Status::FormatError,
          "unsupported dtype (expected f32le) in " + path.string());
  require(meta.value("order", "") == "row-major", Status::FormatError,
          "unsupported order (expected row-major) in " + path.string());

  ActivationDataset ds;
  ds.layer = meta.at("layer").get<int>();
  ds.n_features = meta.at("n_features").get<int>();
  ds.n_trials = meta.at("n_trials").get<int>();
  for (const auto& l : meta.at("labels")) {
    ds.labels.push_back(label_from_string(l.get<std::string>()));
  }
  if (meta.contains("trial_ids")) {
    for (const auto& id : meta["trial_ids"]) {
      ds.trial_ids.push_back(id.get<std::string>());
    }
  }

  const std::size_t n_values =
      static_cast<std::size_t>(ds.n_features) * ds.n_trials;
  std::string payload(n_values * 4, '\0');
  in.read(payload.data(), static_cast<std::streamsize>(payload.size()));
  require(static_cast<std::size_t>(in.gcount()) == payload.size(),
          Status::FormatError, "truncated payload in " + path.string());
  char trailing;
  require(!in.read(&trailing, 1), Status::FormatError,
          "trailing bytes after payload in " + path.string());

  ds.values.resize(n_values);
  for (std::size_t i = 0; i < n_values; ++i) {
    ds.values[i] = get_f32le(payload.data() + i * 4);
  }
  ds.validate();
  return ds;
}

void save_activations_csv(const ActivationDataset& ds,
                          const std::filesystem::path& path) {
  ds.validate();
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(out.good(), Status::IoError, "cannot write " + path.string());
  for (int f = 0; f < ds.n_features; ++f) {
    out << "feature_" << f << ',';
  }
  out << "label\n";
  for (int t = 0; t < ds.n_trials; ++t) {
    for (int f = 0; f < ds.n_features; ++f) {
      out << f32_to_string(ds.at(t, f)) << ',';
    }
    out << to_string(ds.labels[t]) << '\n';
  }
  require(out.good(), Status::IoError, "short write to " + path.string());
}

ActivationDataset load_activations_csv(const std::filesystem::path& path,
                                       int layer) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), Status::IoError, "cannot open " + path.string());
  std::string line;
  require(static_cast<bool>(std::getline(in, line)), Status::FormatError,
          "empty CSV: " + path.string());

  // Header: feature_0,...,feature_{F-1},label
  int n_features = 0;
  {
    std::stringstream header(line);
    std::string cell;
    bool saw_label = false;
    while (std::getline(header, cell, ',')) {
      if (cell == "label") {
        saw_label = true;
        break;
      }
      require(cell == "feature_" + std::to_string(n_features),
              Status::FormatError, "unexpected CSV column: " + cell);
      ++n_features;
    }
    require(saw_label, Status::FormatError,
            "CSV header must end with a label column");
    require(n_features >= 1, Status::FormatError, "CSV has no feature columns");
  }

  ActivationDataset ds;
  ds.layer = layer;
  ds.n_features = n_features;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::size_t start = 0;
    for (int f = 0; f < n_features; ++f) {
      const auto comma = line.find(',', start);
      require(comma != std::string::npos, Status::FormatError,
              "short CSV row in " + path.string());
      ds.values.push_back(f32_from_string(
          std::string_view(line).substr(start, comma - start), path.string()));
      start = comma + 1;
    }
    ds.labels.push_back(label_from_string(line.substr(start)));
    ds.trial_ids.push_back("t" + std::to_string(ds.n_trials));
    ++ds.n_trials;
  }
  ds.validate();
  return ds;
}

ActivationDataset load_activations_auto(const std::filesystem::path& path,
                                        int csv_layer) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), Status::IoError, "cannot open " + path.string());
  const int first = in.peek();
  in.close();
  if (first == '{') return load_activations(path);
  return load_activations_csv(path, csv_layer);
}

}  // namespace slotlab::features
