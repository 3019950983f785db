#pragma once

#include "qbd2d/model.hpp"

#include <json.hpp>

#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <string>

namespace qbd2d {

// Model files are JSON: {"name", "layout": {s0, s1, s2, splus},
// "blocks": {"<region>:<k1>,<k2>": [[...], ...]}} with all 36 keys present.

inline nlohmann::json model_to_json(const QbdModel& model) {
  nlohmann::json doc;
  doc["name"] = model.name();
  const auto& l = model.layout();
  doc["layout"] = {{"s0", l.s0}, {"s1", l.s1}, {"s2", l.s2}, {"splus", l.splus}};
  nlohmann::json blocks = nlohmann::json::object();
  for (int i = 0; i < kBlockCount; ++i) {
    const BlockKey key = BlockKey::from_index(i);
    const Matrix& b = model.block(key);
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index r = 0; r < b.rows(); ++r) {
      nlohmann::json row = nlohmann::json::array();
      for (Eigen::Index c = 0; c < b.cols(); ++c) row.push_back(b(r, c));
      rows.push_back(std::move(row));
    }
    blocks[key.to_string()] = std::move(rows);
  }
  doc["blocks"] = std::move(blocks);
  return doc;
}

inline QbdModel model_from_json(const nlohmann::json& doc) {
  try {
    if (!doc.is_object()) throw InvalidArgument("model document must be a JSON object");
    const auto& lay = doc.at("layout");
    const PhaseLayout layout{lay.at("s0").get<int>(), lay.at("s1").get<int>(), lay.at("s2").get<int>(),
                             lay.at("splus").get<int>()};
    layout.check();
    const auto& blocks_doc = doc.at("blocks");
    if (!blocks_doc.is_object()) throw InvalidArgument("'blocks' must be an object");

    QbdModel::Blocks blocks;
    std::set<int> seen;
    for (const auto& [text, value] : blocks_doc.items()) {
      const BlockKey key = BlockKey::parse(text);
      if (!seen.insert(key.index()).second) throw InvalidArgument("duplicate block " + text);
      const auto [rows, cols] = block_shape(key, layout);
      if (!value.is_array() || static_cast<Eigen::Index>(value.size()) != rows)
        throw InvalidArgument("block " + text + ": expected " + std::to_string(rows) + " rows");
      Matrix m(rows, cols);
      for (Eigen::Index r = 0; r < rows; ++r) {
        const auto& row = value[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
          throw InvalidArgument("block " + text + ": row " + std::to_string(r + 1) + " must have " +
                                std::to_string(cols) + " entries");
        for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = row[static_cast<std::size_t>(c)].get<double>();
      }
      blocks[key.index()] = std::move(m);
    }
    if (seen.size() != kBlockCount) {
      for (int i = 0; i < kBlockCount; ++i)
        if (!seen.count(i)) throw InvalidArgument("missing block " + BlockKey::from_index(i).to_string());
    }
    return QbdModel(doc.value("name", std::string("unnamed")), layout, std::move(blocks));
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed model document: ") + e.what());
  }
}

// One block per line, keys in region order.
inline void write_model(std::ostream& os, const QbdModel& model) {
  const nlohmann::json doc = model_to_json(model);
  os << "{\n  \"name\": " << doc["name"].dump() << ",\n  \"layout\": " << doc["layout"].dump()
     << ",\n  \"blocks\": {\n";
  for (int i = 0; i < kBlockCount; ++i) {
    const std::string key = BlockKey::from_index(i).to_string();
    os << "    " << nlohmann::json(key).dump() << ": " << doc["blocks"][key].dump() << (i + 1 < kBlockCount ? "," : "")
       << '\n';
  }
  os << "  }\n}\n";
}

inline QbdModel read_model(std::istream& is) {
  nlohmann::json doc;
  try {
    is >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("model file is not valid JSON: ") + e.what());
  }
  return model_from_json(doc);
}

inline QbdModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open model file '" + path + "'");
  return read_model(in);
}

}  // namespace qbd2d
