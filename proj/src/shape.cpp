#include "procnet/shape.hpp"

#include <stdexcept>

#include "procnet/errors.hpp"

namespace procnet {

const char* to_string(Construct c) {
  switch (c) {
    case Construct::Item: return "Item";
    case Construct::Stream: return "Stream";
    case Construct::Vector: return "Vector";
    case Construct::Tuple: return "Tuple";
  }
  return "?";
}

Shape Shape::item() { return Shape(); }

Shape Shape::stream(Shape element) {
  Shape s;
  s.kind_ = Construct::Stream;
  s.children_.push_back(std::move(element));
  return s;
}

Shape Shape::vector(std::size_t n, Shape element) {
  if (n == 0) throw ConstructionError("vector shape must have n >= 1");
  Shape s;
  s.kind_ = Construct::Vector;
  s.size_ = n;
  s.children_.push_back(std::move(element));
  return s;
}

Shape Shape::tuple(std::vector<Shape> fields) {
  if (fields.empty()) throw ConstructionError("tuple shape must have at least one field");
  Shape s;
  s.kind_ = Construct::Tuple;
  s.size_ = fields.size();
  s.children_ = std::move(fields);
  return s;
}

const Shape& Shape::element() const {
  if (kind_ != Construct::Stream && kind_ != Construct::Vector) {
    throw ConstructionError("shape " + to_string() + " has no element shape");
  }
  return children_.front();
}

const Shape& Shape::field(std::size_t i) const {
  if (kind_ != Construct::Tuple || i >= children_.size()) {
    throw ConstructionError("shape " + to_string() + " has no field " + std::to_string(i));
  }
  return children_[i];
}

std::string Shape::to_string() const {
  switch (kind_) {
    case Construct::Item: return "Item";
    case Construct::Stream: return "<" + children_.front().to_string() + ">";
    case Construct::Vector:
      return "[" + children_.front().to_string() + "]" + std::to_string(size_);
    case Construct::Tuple: {
      std::string s = "(";
      for (std::size_t i = 0; i < children_.size(); ++i) {
        if (i) s += ",";
        s += children_[i].to_string();
      }
      return s + ")";
    }
  }
  return "?";
}

Port Port::item(ChannelId data) {
  Port p;
  p.kind_ = Construct::Item;
  p.channel_ = data;
  return p;
}

Port Port::stream(Port element, ChannelId eot) {
  Port p;
  p.kind_ = Construct::Stream;
  p.channel_ = eot;
  p.children_.push_back(std::move(element));
  return p;
}

Port Port::vector(std::vector<Port> elements) {
  if (elements.empty()) throw ConstructionError("vector port must have n >= 1");
  const Shape first = elements.front().shape();
  for (const auto& e : elements) {
    if (!(e.shape() == first)) {
      throw ConstructionError("vector port elements disagree in shape: " + first.to_string() +
                              " vs " + e.shape().to_string());
    }
  }
  Port p;
  p.kind_ = Construct::Vector;
  p.children_ = std::move(elements);
  return p;
}

Port Port::tuple(std::vector<Port> fields) {
  if (fields.empty()) throw ConstructionError("tuple port must have at least one field");
  Port p;
  p.kind_ = Construct::Tuple;
  p.children_ = std::move(fields);
  return p;
}

Shape Port::shape() const {
  switch (kind_) {
    case Construct::Item: return Shape::item();
    case Construct::Stream: return Shape::stream(children_.front().shape());
    case Construct::Vector: return Shape::vector(children_.size(), children_.front().shape());
    case Construct::Tuple: {
      std::vector<Shape> fields;
      fields.reserve(children_.size());
      for (const auto& c : children_) fields.push_back(c.shape());
      return Shape::tuple(std::move(fields));
    }
  }
  return Shape::item();
}

ChannelId Port::data() const {
  if (kind_ != Construct::Item) throw ConstructionError("data() on non-item port");
  return channel_;
}

ChannelId Port::eot() const {
  if (kind_ != Construct::Stream) throw ConstructionError("eot() on non-stream port");
  return channel_;
}

const Port& Port::element() const {
  if (kind_ != Construct::Stream) throw ConstructionError("element() on non-stream port");
  return children_.front();
}

const Port& Port::operator[](std::size_t i) const {
  if ((kind_ != Construct::Vector && kind_ != Construct::Tuple) || i >= children_.size()) {
    throw ConstructionError("port index " + std::to_string(i) + " out of range for " +
                            shape().to_string());
  }
  return children_[i];
}

void Port::collect_channels(std::vector<ChannelId>& out) const {
  switch (kind_) {
    case Construct::Item: out.push_back(channel_); return;
    case Construct::Stream:
      out.push_back(channel_);
      children_.front().collect_channels(out);
      return;
    case Construct::Vector:
    case Construct::Tuple:
      for (const auto& c : children_) c.collect_channels(out);
      return;
  }
}

std::vector<ChannelId> Port::channels() const {
  std::vector<ChannelId> out;
  collect_channels(out);
  return out;
}

std::vector<ChannelId> Port::heads() const {
  switch (kind_) {
    case Construct::Item: return {channel_};
    case Construct::Stream: {
      std::vector<ChannelId> h{channel_};
      auto inner = children_.front().heads();
      h.insert(h.end(), inner.begin(), inner.end());
      return h;
    }
    case Construct::Vector:
    case Construct::Tuple: return children_.front().heads();
  }
  return {};
}

bool Port::flat() const {
  if (kind_ != Construct::Vector && kind_ != Construct::Tuple) return false;
  for (const auto& c : children_) {
    if (c.kind() != Construct::Item) return false;
  }
  return true;
}

Value Value::words(const std::vector<Word>& ws) {
  List items;
  items.reserve(ws.size());
  for (Word w : ws) items.emplace_back(w);
  return Value(std::move(items));
}

Value Value::ints(std::initializer_list<std::int64_t> xs, int width) {
  List items;
  for (auto x : xs) items.emplace_back(Word::wrap(x, width));
  return Value(std::move(items));
}

Word Value::word() const {
  if (!is_word()) throw std::logic_error("value is a list, not a word: " + to_string());
  return std::get<Word>(data_);
}

const Value::List& Value::items() const {
  if (is_word()) throw std::logic_error("value is a word, not a list: " + to_string());
  return std::get<List>(data_);
}

Value::List& Value::items() {
  if (is_word()) throw std::logic_error("value is a word, not a list: " + to_string());
  return std::get<List>(data_);
}

std::vector<Word> Value::as_words() const {
  std::vector<Word> out;
  for (const auto& v : items()) out.push_back(v.word());
  return out;
}

bool Value::conforms_to(const Shape& shape) const {
  switch (shape.kind()) {
    case Construct::Item: return is_word();
    case Construct::Stream:
      if (is_word()) return false;
      for (const auto& v : items()) {
        if (!v.conforms_to(shape.element())) return false;
      }
      return true;
    case Construct::Vector:
      if (is_word() || items().size() != shape.size()) return false;
      for (const auto& v : items()) {
        if (!v.conforms_to(shape.element())) return false;
      }
      return true;
    case Construct::Tuple:
      if (is_word() || items().size() != shape.size()) return false;
      for (std::size_t i = 0; i < shape.size(); ++i) {
        if (!items()[i].conforms_to(shape.field(i))) return false;
      }
      return true;
  }
  return false;
}

std::string Value::to_string() const {
  if (is_word()) return std::get<Word>(data_).to_string();
  std::string s = "[";
  const auto& xs = std::get<List>(data_);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) s += ",";
    s += xs[i].to_string();
  }
  return s + "]";
}

}  // namespace procnet
