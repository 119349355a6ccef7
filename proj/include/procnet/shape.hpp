#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "procnet/word.hpp"

namespace procnet {

enum class ChannelId : std::uint32_t {};
enum class ProcessId : std::uint32_t {};

inline std::uint32_t index_of(ChannelId c) { return static_cast<std::uint32_t>(c); }
inline std::uint32_t index_of(ProcessId p) { return static_cast<std::uint32_t>(p); }

/// Communication constructs. Stream and Vector are the two primitive data
/// refinements of a list; Tuple carries heterogeneous fields in parallel.
enum class Construct { Item, Stream, Vector, Tuple };

const char* to_string(Construct c);

/// Recursive description of a construct, independent of any channels.
class Shape {
 public:
  static Shape item();
  static Shape stream(Shape element);
  static Shape vector(std::size_t n, Shape element);
  static Shape tuple(std::vector<Shape> fields);

  Construct kind() const { return kind_; }
  /// Vector length or tuple arity. Zero for Item and Stream.
  std::size_t size() const { return size_; }
  /// Element shape of a Stream or Vector.
  const Shape& element() const;
  /// Field shape of a Tuple.
  const Shape& field(std::size_t i) const;

  std::string to_string() const;

  friend bool operator==(const Shape&, const Shape&) = default;

 private:
  Shape() = default;

  Construct kind_ = Construct::Item;
  std::size_t size_ = 0;
  std::vector<Shape> children_;
};

/// A shape bound to concrete channels. Ports are plain wiring descriptions:
/// copying one does not create channels.
///
/// Item: `data()` is the data channel.
/// Stream: `eot()` is the EOT channel, `element()` the per-element port,
/// reused for every element of the stream.
/// Vector/Tuple: one child port per element, all communicated in parallel.
class Port {
 public:
  Port() = default;

  static Port item(ChannelId data);
  static Port stream(Port element, ChannelId eot);
  static Port vector(std::vector<Port> elements);
  static Port tuple(std::vector<Port> fields);

  Construct kind() const { return kind_; }
  Shape shape() const;

  ChannelId data() const;
  ChannelId eot() const;
  const Port& element() const;
  const Port& operator[](std::size_t i) const;
  std::size_t size() const { return children_.size(); }
  const std::vector<Port>& children() const { return children_; }

  /// Every channel in this port tree, depth first.
  std::vector<ChannelId> channels() const;
  void collect_channels(std::vector<ChannelId>& out) const;

  /// Channels that can carry the first event of one construct on this port.
  /// A vector or tuple is guarded by its first element, a stream by its EOT
  /// channel followed by the heads of its element.
  std::vector<ChannelId> heads() const;

  /// True when every child of a Vector/Tuple is an Item.
  bool flat() const;

 private:
  Construct kind_ = Construct::Item;
  ChannelId channel_{};
  std::vector<Port> children_;
};

/// Plain data a construct communicates: a Word or a list of values.
class Value {
 public:
  using List = std::vector<Value>;

  Value() : data_(Word{}) {}
  Value(Word w) : data_(w) {}  // NOLINT(google-explicit-constructor)
  explicit Value(List items) : data_(std::move(items)) {}

  static Value list(List items) { return Value(std::move(items)); }
  static Value words(const std::vector<Word>& ws);
  static Value ints(std::initializer_list<std::int64_t> xs, int width = Word::kDefaultWidth);

  bool is_word() const { return std::holds_alternative<Word>(data_); }
  Word word() const;
  const List& items() const;
  List& items();

  /// Flattens a list of Words; throws if any entry is not a Word.
  std::vector<Word> as_words() const;

  /// Shape conformance: Items hold a Word, Vectors hold exactly n values,
  /// Tuples hold one value per field, Streams hold any number of values.
  bool conforms_to(const Shape& shape) const;

  std::string to_string() const;

  friend bool operator==(const Value&, const Value&) = default;

 private:
  std::variant<Word, List> data_;
};

}  // namespace procnet
