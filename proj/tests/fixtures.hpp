#pragma once

#include <optional>
#include <string>

#include "aapa/core_model.hpp"

namespace fixture {

inline aapa::Anchor anchor(std::string id, std::string type, aapa::Vec2 pos, aapa::Vec2 size = {20, 20},
                           double confidence = 1.0, aapa::AnchorStatus status = aapa::AnchorStatus::visible) {
  aapa::Anchor a;
  a.anchor_id = std::move(id);
  a.attributes = {std::move(type), pos, size, {}};
  a.confidence = confidence;
  a.status = status;
  return a;
}

inline aapa::Percept percept(int id, std::string type, aapa::Vec2 pos, aapa::Vec2 size = {20, 20}) {
  return {id, {std::move(type), pos, size, {}}, 1.0};
}

inline void attach(aapa::Anchor& child, const aapa::Anchor& parent) {
  child.parent = parent.anchor_id;
  child.parent_offset = child.attributes.position - parent.attributes.position;
  child.status = aapa::AnchorStatus::attached;
}

}  // namespace fixture
