#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "adiasim/errors.hpp"

namespace adiasim {

enum class DeviceKind { NMos, PMos };

enum class NodeRole { Internal, Input, Output, SupplyRail, GroundRail, PowerClock };

const char* node_role_name(NodeRole role);

/// Opaque index into a netlist's node table.
struct NodeId {
  static constexpr std::uint32_t npos = 0xffffffffu;

  std::uint32_t index = npos;

  constexpr NodeId() = default;
  constexpr explicit NodeId(std::uint32_t i) : index(i) {}
  constexpr bool valid() const { return index != npos; }

  friend constexpr bool operator==(NodeId, NodeId) = default;
};

struct Node {
  std::string name;
  double capacitance = 0.0; // farads; load C_L for outputs, 0 for plain wires
  NodeRole role = NodeRole::Internal;

  friend bool operator==(const Node&, const Node&) = default;
};

/// A MOS switch. Terminals are node indices; channel conduction is symmetric
/// between source and drain.
struct Device {
  std::string name; // starts with 'M'/'m' so it round-trips through the file format
  DeviceKind kind = DeviceKind::NMos;
  NodeId gate;
  NodeId source;
  NodeId drain;
  double on_resistance = 0.0; // ohms, > 0

  friend bool operator==(const Device&, const Device&) = default;
};

/// Default on-resistance used when neither the device line nor the file's
/// .DEFAULT directive supplies one.
inline constexpr double kDefaultOnResistance = 10e3;

class Netlist {
public:
  Netlist() = default;
  explicit Netlist(std::string name) : name_(std::move(name)) {}

  const std::string& name() const { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }

  /// Declares a node. Names are unique case-insensitively; the declared
  /// spelling is preserved. Throws DuplicateName / InvalidValue.
  NodeId add_node(std::string name, double capacitance = 0.0,
                  NodeRole role = NodeRole::Internal);

  /// Adds a switch. All terminals must be declared nodes, on_resistance must
  /// be positive and finite, and source != drain.
  void add_device(std::string name, DeviceKind kind, NodeId gate, NodeId source,
                  NodeId drain, double on_resistance = kDefaultOnResistance);

  /// Appends to the ordered input (output) pin list and assigns the node the
  /// Input (Output) role. Order is significant: adders list A, B, C first.
  void add_input(NodeId node);
  void add_output(NodeId node);

  std::optional<NodeId> find_node(std::string_view name) const;
  std::optional<std::uint32_t> find_device(std::string_view name) const;

  const Node& node(NodeId id) const { return nodes_[id.index]; }
  Node& node(NodeId id) { return nodes_[id.index]; }

  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Device>& devices() const { return devices_; }
  const std::vector<NodeId>& inputs() const { return inputs_; }
  const std::vector<NodeId>& outputs() const { return outputs_; }

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t device_count() const { return devices_.size(); }

  /// All nodes with the given role, in declaration order.
  std::vector<NodeId> nodes_with_role(NodeRole role) const;

  /// The unique ground rail, if declared.
  std::optional<NodeId> ground() const;

  /// True if any node is a PowerClock rail.
  bool has_power_clock() const;

  friend bool operator==(const Netlist& a, const Netlist& b) {
    return a.name_ == b.name_ && a.nodes_ == b.nodes_ &&
           a.devices_ == b.devices_ && a.inputs_ == b.inputs_ &&
           a.outputs_ == b.outputs_;
  }

private:
  std::string name_;
  std::vector<Node> nodes_;
  std::vector<Device> devices_;
  std::vector<NodeId> inputs_;
  std::vector<NodeId> outputs_;
  std::unordered_map<std::string, std::uint32_t> node_index_;   // lowercase name
  std::unordered_map<std::string, std::uint32_t> device_index_; // lowercase name
};

/// Parses the text netlist format (see README for the grammar). Every failure
/// is a SimError carrying the offending line and column; no input crashes.
Netlist parse_netlist(std::string_view text);

/// Serializes a netlist so that parse_netlist(serialize_netlist(n)) == n.
/// Always succeeds, including on empty netlists.
std::string serialize_netlist(const Netlist& netlist);

struct Diagnostic {
  enum class Code {
    NoDevices,
    FloatingNode,          // internal node that is no device terminal
    ZeroLoadCapacitance,   // output node with C <= 0
    MissingGroundRail,
    MultipleGroundRails,
    MissingSupply,         // neither a SupplyRail nor a PowerClock
    UnlistedPin,           // Input/Output role not present in the pin lists
    InvalidResistance,
    SelfShortedDevice,
    DanglingTerminal,      // device terminal out of range
  };

  Code code;
  std::string element; // offending node or device name
  std::string message;
};

const char* diagnostic_code_name(Diagnostic::Code code);

/// Re-checks every netlist invariant; returns one entry per violation and an
/// empty list iff the netlist is simulatable.
std::vector<Diagnostic> validate(const Netlist& netlist);

} // namespace adiasim
