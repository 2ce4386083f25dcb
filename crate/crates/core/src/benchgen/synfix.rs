use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::Evolving;
use crate::error::{HoktError, Result};
use crate::graph::{DynamicNetwork, NodeId};

/// Fixed-community benchmark: 4 groups of 32 nodes, every node of degree
/// about 16 with `z_out` links leaving its group. After each step three
/// members of every group move, one to each of the other groups, and are
/// rewired under their new membership.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SynfixSpec {
    pub communities: usize,
    pub community_size: usize,
    pub node_degree: usize,
    pub z_out: usize,
    pub timesteps: usize,
    pub moves_per_community: usize,
    pub seed: u64,
}

impl Default for SynfixSpec {
    fn default() -> Self {
        SynfixSpec {
            communities: 4,
            community_size: 32,
            node_degree: 16,
            z_out: 5,
            timesteps: 10,
            moves_per_community: 3,
            seed: 0,
        }
    }
}

impl SynfixSpec {
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(HoktError::Generation(msg));
        if self.communities < 2 || self.community_size < 2 {
            return fail("need at least two communities of at least two nodes".into());
        }
        if self.z_out >= self.node_degree {
            return fail(format!(
                "external degree {} must be below node degree {}",
                self.z_out, self.node_degree
            ));
        }
        if self.node_degree - self.z_out >= self.community_size {
            return fail(format!(
                "internal degree {} does not fit in communities of {}",
                self.node_degree - self.z_out,
                self.community_size
            ));
        }
        if self.moves_per_community > self.community_size {
            return fail("more moves than community members".into());
        }
        if self.moves_per_community > 0
            && !self
                .moves_per_community
                .is_multiple_of(self.communities - 1)
        {
            return fail(format!(
                "{} moves cannot be spread evenly over {} other communities",
                self.moves_per_community,
                self.communities - 1
            ));
        }
        if self.timesteps == 0 {
            return fail("at least one timestep is required".into());
        }
        Ok(())
    }
}

pub fn gen_synfix(spec: &SynfixSpec) -> Result<DynamicNetwork> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let n = spec.communities * spec.community_size;
    let k_in = spec.node_degree - spec.z_out;
    let k_out = spec.z_out;

    let mut state = Evolving::new((0..n).map(|v| Some(v / spec.community_size)).collect());
    let membership = state.membership.clone();
    for c in 0..spec.communities {
        let stubs: Vec<NodeId> = state
            .members(c)
            .into_iter()
            .flat_map(|v| std::iter::repeat_n(v, k_in))
            .collect();
        state.match_stubs(stubs, |_, _| true, &mut rng);
    }
    let stubs: Vec<NodeId> = (0..n).flat_map(|v| std::iter::repeat_n(v, k_out)).collect();
    state.match_stubs(stubs, |u, v| membership[u] != membership[v], &mut rng);

    let mut snapshots = Vec::with_capacity(spec.timesteps);
    let mut truth = Vec::with_capacity(spec.timesteps);
    let (g, p) = state.snapshot()?;
    snapshots.push(g);
    truth.push(p);

    for _ in 1..spec.timesteps {
        let mut moved = Vec::new();
        for c in 0..spec.communities {
            let mut members = state.members(c);
            members.shuffle(&mut rng);
            let mut targets: Vec<usize> = (0..spec.communities).filter(|&d| d != c).collect();
            targets.shuffle(&mut rng);
            for (k, &v) in members.iter().take(spec.moves_per_community).enumerate() {
                moved.push((v, targets[k % targets.len()]));
            }
        }
        for &(v, target) in &moved {
            state.membership[v] = Some(target);
        }
        for &(v, _) in &moved {
            state.isolate(v);
        }
        let mut order: Vec<NodeId> = moved.iter().map(|m| m.0).collect();
        order.shuffle(&mut rng);
        for v in order {
            state.wire_node(v, k_in, k_out, &mut rng);
        }
        let (g, p) = state.snapshot()?;
        snapshots.push(g);
        truth.push(p);
    }
    DynamicNetwork::new(snapshots, Some(truth))
}
