//! Lock-step communication between bricks: flooding with a hop budget,
//! min/max gossip, a spanning-tree mean, and failed-unit scenarios.
//!
//! Every primitive runs in synchronous rounds over the wall adjacency. A
//! failed cell neither sends nor receives.

mod fault;
mod flood;
mod gossip;

pub use fault::{nested_fault_order, FaultScenario};
pub use flood::{connectivity_oracle, flood, flood_route, message_cost, FloodOutcome, Message, MessageCost, RunRecord};
pub use gossip::{gossip_aggregate, spanning_tree_mean, Aggregation, GossipState};
