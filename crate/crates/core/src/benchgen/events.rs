use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::Evolving;
use crate::error::{HoktError, Result};
use crate::graph::{DynamicNetwork, NodeId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    BirthDeath,
    ExpandContract,
    Intermittent,
    MergeSplit,
}

impl EventKind {
    pub const ALL: [EventKind; 4] = [
        EventKind::BirthDeath,
        EventKind::ExpandContract,
        EventKind::Intermittent,
        EventKind::MergeSplit,
    ];

    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "birth_death" => Ok(EventKind::BirthDeath),
            "expand_contract" => Ok(EventKind::ExpandContract),
            "intermittent" => Ok(EventKind::Intermittent),
            "merge_split" => Ok(EventKind::MergeSplit),
            other => Err(HoktError::input(format!("unknown event kind `{other}`"))),
        }
    }
}

/// Planted-partition network whose communities undergo one kind of event
/// at every step.
///
/// The first snapshot has `nodes / community_size` communities; every node
/// gets `round(mean_degree * intra_fraction)` internal and the remaining
/// external links. Each later step applies the event to
/// `ceil(affected_fraction * communities)` communities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EventSpec {
    pub kind: EventKind,
    pub nodes: usize,
    pub mean_degree: usize,
    pub timesteps: usize,
    pub affected_fraction: f64,
    pub resize_fraction: f64,
    pub community_size: usize,
    pub intra_fraction: f64,
    pub seed: u64,
}

impl Default for EventSpec {
    fn default() -> Self {
        EventSpec {
            kind: EventKind::BirthDeath,
            nodes: 1000,
            mean_degree: 15,
            timesteps: 5,
            affected_fraction: 0.10,
            resize_fraction: 0.25,
            community_size: 25,
            intra_fraction: 0.8,
            seed: 0,
        }
    }
}

impl EventSpec {
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: &str| Err(HoktError::Generation(msg.to_string()));
        for f in [
            self.affected_fraction,
            self.resize_fraction,
            self.intra_fraction,
        ] {
            if !(f > 0.0 && f < 1.0) {
                return fail("fractions must lie strictly between 0 and 1");
            }
        }
        if self.mean_degree >= self.nodes {
            return fail("mean degree must be below the node count");
        }
        if self.community_size < 4 || self.nodes < 4 * self.community_size {
            return fail("need at least four communities of at least four nodes");
        }
        if self.intra_degree() >= self.community_size {
            return fail("internal degree does not fit in one community");
        }
        if self.timesteps == 0 {
            return fail("at least one timestep is required");
        }
        Ok(())
    }

    fn community_count(&self) -> usize {
        self.nodes / self.community_size
    }

    fn intra_degree(&self) -> usize {
        (self.mean_degree as f64 * self.intra_fraction).round() as usize
    }

    fn inter_degree(&self) -> usize {
        self.mean_degree - self.intra_degree()
    }

    fn affected(&self) -> usize {
        (self.affected_fraction * self.community_count() as f64).ceil() as usize
    }
}

/// What happened to which community between step `t - 1` and `t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "event")]
pub enum EventRecord {
    Dissolved {
        t: usize,
        community: usize,
    },
    Born {
        t: usize,
        community: usize,
        size: usize,
    },
    Expanded {
        t: usize,
        community: usize,
        from: usize,
        to: usize,
    },
    Contracted {
        t: usize,
        community: usize,
        from: usize,
        to: usize,
    },
    Hidden {
        t: usize,
        community: usize,
        nodes: Vec<NodeId>,
    },
    Restored {
        t: usize,
        community: usize,
        nodes: Vec<NodeId>,
    },
    Merged {
        t: usize,
        into: usize,
        absorbed: usize,
    },
    Split {
        t: usize,
        source: usize,
        new_community: usize,
    },
}

pub fn gen_events(spec: &EventSpec) -> Result<DynamicNetwork> {
    gen_events_logged(spec).map(|(net, _)| net)
}

/// [`gen_events`] plus the list of events applied at each step.
pub fn gen_events_logged(spec: &EventSpec) -> Result<(DynamicNetwork, Vec<EventRecord>)> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let count = spec.community_count();
    let n = spec.nodes;
    let (k_in, k_out) = (spec.intra_degree(), spec.inter_degree());

    let mut labels: Vec<usize> = (0..n).map(|v| v % count).collect();
    labels.shuffle(&mut rng);
    let mut state = Evolving::new(labels.into_iter().map(Some).collect());
    let membership = state.membership.clone();
    for c in 0..count {
        let stubs: Vec<NodeId> = state
            .members(c)
            .into_iter()
            .flat_map(|v| std::iter::repeat_n(v, k_in))
            .collect();
        state.match_stubs(stubs, |_, _| true, &mut rng);
    }
    let stubs: Vec<NodeId> = (0..n).flat_map(|v| std::iter::repeat_n(v, k_out)).collect();
    state.match_stubs(stubs, |u, v| membership[u] != membership[v], &mut rng);

    let mut gen = EventGen {
        spec,
        state,
        k_in,
        k_out,
        hidden: Vec::new(),
        log: Vec::new(),
    };
    let mut snapshots = Vec::with_capacity(spec.timesteps);
    let mut truth = Vec::with_capacity(spec.timesteps);
    let (g, p) = gen.state.snapshot()?;
    snapshots.push(g);
    truth.push(p);

    for t in 2..=spec.timesteps {
        match spec.kind {
            EventKind::BirthDeath => gen.birth_death(t, &mut rng)?,
            EventKind::ExpandContract => gen.expand_contract(t, &mut rng)?,
            EventKind::Intermittent => gen.intermittent(t, &mut rng)?,
            EventKind::MergeSplit => gen.merge_split(t, &mut rng)?,
        }
        let (g, p) = gen.state.snapshot()?;
        snapshots.push(g);
        truth.push(p);
    }
    Ok((DynamicNetwork::new(snapshots, Some(truth))?, gen.log))
}

/// Nodes hidden in one step together with their label and stashed edges.
struct HiddenGroup {
    community: usize,
    nodes: Vec<(NodeId, Vec<NodeId>)>,
}

struct EventGen<'a> {
    spec: &'a EventSpec,
    state: Evolving,
    k_in: usize,
    k_out: usize,
    hidden: Vec<HiddenGroup>,
    log: Vec<EventRecord>,
}

impl EventGen<'_> {
    /// Labels of communities that currently have members.
    fn live_communities(&self) -> Vec<usize> {
        let mut live: Vec<usize> = self.state.membership.iter().flatten().copied().collect();
        live.sort_unstable();
        live.dedup();
        live
    }

    fn choose(&self, pool: &[usize], k: usize, rng: &mut ChaCha8Rng) -> Result<Vec<usize>> {
        if pool.len() < k {
            return Err(HoktError::Generation(format!(
                "need {k} communities for the event but only {} are available",
                pool.len()
            )));
        }
        let mut picked: Vec<usize> = pool.choose_multiple(rng, k).copied().collect();
        picked.sort_unstable();
        Ok(picked)
    }

    /// Give `moved` nodes their new labels, then rewire each one.
    fn relocate(&mut self, moved: &[(NodeId, usize)], rng: &mut ChaCha8Rng) {
        for &(v, c) in moved {
            self.state.membership[v] = Some(c);
        }
        for &(v, _) in moved {
            self.state.isolate(v);
        }
        let mut order: Vec<NodeId> = moved.iter().map(|m| m.0).collect();
        order.shuffle(rng);
        for v in order {
            self.state.wire_node(v, self.k_in, self.k_out, rng);
        }
    }

    fn birth_death(&mut self, t: usize, rng: &mut ChaCha8Rng) -> Result<()> {
        let live = self.live_communities();
        let dying = self.choose(&live, self.spec.affected(), rng)?;
        let survivors: Vec<usize> = live
            .iter()
            .copied()
            .filter(|c| !dying.contains(c))
            .collect();
        let mut moved = Vec::new();
        for &c in &dying {
            for v in self.state.members(c) {
                moved.push((v, *survivors.choose(rng).unwrap()));
            }
            self.log.push(EventRecord::Dissolved { t, community: c });
        }
        self.relocate(&moved, rng);

        // reuse the dissolved labels for the newborn communities
        let mut moved = Vec::new();
        for &c in &dying {
            let mut pool: Vec<NodeId> = (0..self.state.membership.len())
                .filter(|&v| {
                    self.state.membership[v].is_some() && !moved.iter().any(|&(m, _)| m == v)
                })
                .collect();
            pool.shuffle(rng);
            for &v in pool.iter().take(self.spec.community_size) {
                moved.push((v, c));
            }
            self.log.push(EventRecord::Born {
                t,
                community: c,
                size: self.spec.community_size,
            });
        }
        self.relocate(&moved, rng);
        Ok(())
    }

    fn expand_contract(&mut self, t: usize, rng: &mut ChaCha8Rng) -> Result<()> {
        let live = self.live_communities();
        let picked = self.choose(&live, self.spec.affected(), rng)?;
        let others: Vec<usize> = live
            .iter()
            .copied()
            .filter(|c| !picked.contains(c))
            .collect();
        let sizes: BTreeMap<usize, usize> = live
            .iter()
            .map(|&c| (c, self.state.members(c).len()))
            .collect();
        let expand_count = picked.len().div_ceil(2);
        let mut moved: Vec<(NodeId, usize)> = Vec::new();

        for (i, &c) in picked.iter().enumerate() {
            let size = sizes[&c];
            if i < expand_count {
                let target = (size as f64 * (1.0 + self.spec.resize_fraction)).ceil() as usize;
                // donors keep at least half of their members
                let mut donors: Vec<NodeId> = Vec::new();
                for &d in &others {
                    let mut members = self.state.members(d);
                    members.retain(|v| !moved.iter().any(|&(m, _)| m == *v));
                    members.shuffle(rng);
                    donors.extend(members.into_iter().take(sizes[&d] / 2));
                }
                donors.shuffle(rng);
                if donors.len() < target - size {
                    return Err(HoktError::Generation("not enough donors to expand".into()));
                }
                moved.extend(donors.into_iter().take(target - size).map(|v| (v, c)));
                self.log.push(EventRecord::Expanded {
                    t,
                    community: c,
                    from: size,
                    to: target,
                });
            } else {
                let target = (size as f64 * (1.0 - self.spec.resize_fraction)).ceil() as usize;
                let mut members = self.state.members(c);
                members.shuffle(rng);
                for &v in members.iter().take(size - target) {
                    moved.push((v, *others.choose(rng).unwrap()));
                }
                self.log.push(EventRecord::Contracted {
                    t,
                    community: c,
                    from: size,
                    to: target,
                });
            }
        }
        self.relocate(&moved, rng);
        Ok(())
    }

    fn intermittent(&mut self, t: usize, rng: &mut ChaCha8Rng) -> Result<()> {
        let restoring = std::mem::take(&mut self.hidden);
        let restored_labels: Vec<usize> = restoring.iter().map(|g| g.community).collect();
        for group in &restoring {
            for (v, _) in &group.nodes {
                self.state.membership[*v] = Some(group.community);
            }
        }
        for group in restoring {
            for (v, old) in &group.nodes {
                for &u in old {
                    if self.state.membership[u].is_some() {
                        self.state.add_edge(*v, u);
                    }
                }
            }
            self.log.push(EventRecord::Restored {
                t,
                community: group.community,
                nodes: group.nodes.iter().map(|g| g.0).collect(),
            });
        }

        let live: Vec<usize> = self
            .live_communities()
            .into_iter()
            .filter(|c| !restored_labels.contains(c))
            .collect();
        for c in self.choose(&live, self.spec.affected(), rng)? {
            let members = self.state.members(c);
            let mut nodes = Vec::with_capacity(members.len());
            for &v in &members {
                self.state.membership[v] = None;
            }
            for &v in &members {
                nodes.push((v, self.state.isolate(v)));
            }
            self.log.push(EventRecord::Hidden {
                t,
                community: c,
                nodes: members,
            });
            self.hidden.push(HiddenGroup {
                community: c,
                nodes,
            });
        }
        Ok(())
    }

    fn merge_split(&mut self, t: usize, rng: &mut ChaCha8Rng) -> Result<()> {
        let live = self.live_communities();
        let k = self.spec.affected().max(2);
        let pairs = k / 2;
        let picked = self.choose(&live, 2 * pairs, rng)?;
        let rest: Vec<usize> = live
            .iter()
            .copied()
            .filter(|c| !picked.contains(c))
            .collect();
        let splitting = self.choose(&rest, pairs, rng)?;

        let mut moved = Vec::new();
        let mut freed = Vec::new();
        for pair in picked.chunks(2) {
            let (into, absorbed) = (pair[0], pair[1]);
            moved.extend(self.state.members(absorbed).into_iter().map(|v| (v, into)));
            freed.push(absorbed);
            self.log.push(EventRecord::Merged { t, into, absorbed });
        }
        for (&source, &new_community) in splitting.iter().zip(&freed) {
            let mut members = self.state.members(source);
            members.shuffle(rng);
            let half = members.len() / 2;
            moved.extend(members.into_iter().take(half).map(|v| (v, new_community)));
            self.log.push(EventRecord::Split {
                t,
                source,
                new_community,
            });
        }
        self.relocate(&moved, rng);
        Ok(())
    }
}
