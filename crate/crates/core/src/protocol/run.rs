//! One round of the user-to-server protocol.
//!
//! Every user produces exactly one report from her own row and her own
//! random stream; the server then assembles the reports into a
//! [`NoisyGraph`]. Nothing flows back from the server to the users.

use super::config::{Mechanism, PrivacyConfig, Symmetrize};
use super::noisy::{NoisyGraph, Provenance, UserMeta};
use super::roles::{assign_roles, Role, RoleVector};
use crate::error::{Error, Result};
use crate::graph::{Graph, NeighborList};
use crate::mechanisms::{
    allocate_budget, dprr, edge_budget, local_lap_split, rr_keep_prob, select_top_pairs,
    warner_rr, BudgetSplit, DprrRowResult, LocalLapReport,
};
use crate::par::Exec;
use crate::rng::{RngStream, GRAPH_LANE};

/// Message a single user sends to the server.
#[derive(Debug, Clone)]
pub enum UserReport {
    /// The row itself, unperturbed.
    Public(NeighborList),
    /// Nothing: the user opted out of the collection.
    Withheld,
    Dprr(DprrRowResult),
    Rr { noisy: NeighborList, p: f64 },
    LocalLap(Box<LocalLapReport>),
}

/// Protocol step, reported to a [`ProtocolObserver`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProtocolEvent {
    /// User `i` produced her report.
    Report(usize),
    /// The server started assembling the reports.
    Assemble,
}

pub trait ProtocolObserver: Sync {
    fn on_event(&self, event: ProtocolEvent);
}

struct NoObserver;

impl ProtocolObserver for NoObserver {
    fn on_event(&self, _: ProtocolEvent) {}
}

/// Runs the protocol with the default execution mode.
pub fn run_protocol(g: &Graph, cfg: &PrivacyConfig, stream: RngStream) -> Result<NoisyGraph> {
    run_protocol_with(g, cfg, stream, Exec::default(), &NoObserver)
}

/// Runs the protocol with an explicit execution mode.
pub fn run_protocol_exec(g: &Graph, cfg: &PrivacyConfig, stream: RngStream, exec: Exec) -> Result<NoisyGraph> {
    run_protocol_with(g, cfg, stream, exec, &NoObserver)
}

/// Budget split private users of this configuration apply, if any.
pub fn private_split(cfg: &PrivacyConfig) -> Result<Option<BudgetSplit>> {
    Ok(match cfg.mechanism {
        Mechanism::Dprr => Some(allocate_budget(cfg.epsilon, cfg.n_max, cfg.alpha, cfg.budget_mode)?),
        Mechanism::LocalLap => Some(local_lap_split(cfg.epsilon)?),
        _ => None,
    })
}

/// Runs the protocol on `g`. User `i` draws from `stream.user(i)`; roles are
/// drawn from `(cfg.role_seed, stream.graph)`.
pub fn run_protocol_with(
    g: &Graph,
    cfg: &PrivacyConfig,
    stream: RngStream,
    exec: Exec,
    observer: &dyn ProtocolObserver,
) -> Result<NoisyGraph> {
    cfg.validate()?;
    let n = g.node_count();
    if cfg.mechanism == Mechanism::LocalLap && g.is_directed() {
        return Err(Error::arg("LocalLap requires an undirected graph"));
    }
    if cfg.mechanism == Mechanism::Dprr && n > cfg.n_max {
        log::warn!("graph has {n} nodes but n_max is {}", cfg.n_max);
    }
    let roles = match cfg.mechanism {
        Mechanism::NonprivFull => RoleVector::all(n, Role::NonPrivate),
        _ => assign_roles(n, cfg.rho, RngStream::new(cfg.role_seed, stream.graph, GRAPH_LANE)),
    };
    let all_public = roles.count_non_private() == n;
    let split = if all_public { None } else { private_split(cfg)? };
    let rr_p = match cfg.mechanism {
        Mechanism::Rr if !all_public => Some(rr_keep_prob(cfg.epsilon)?),
        _ => None,
    };

    let reports: Vec<UserReport> = exec
        .map_range(n, |i| -> Result<UserReport> {
            let row = g.neighbor_list(i)?;
            let report = if !roles.is_private(i) {
                UserReport::Public(row)
            } else {
                let mut rng = stream.user(i).rng();
                match cfg.mechanism {
                    Mechanism::Dprr => {
                        UserReport::Dprr(dprr(&row, split.as_ref().expect("split"), &mut rng)?)
                    }
                    Mechanism::Rr => {
                        let p = rr_p.expect("keep probability");
                        UserReport::Rr {
                            noisy: warner_rr(&row, p, &mut rng)?,
                            p,
                        }
                    }
                    Mechanism::LocalLap => UserReport::LocalLap(Box::new(LocalLapReport::create(
                        &row,
                        split.as_ref().expect("split"),
                        rng,
                    )?)),
                    Mechanism::NonprivPart => UserReport::Withheld,
                    Mechanism::NonprivFull => unreachable!("every user is public"),
                }
            };
            observer.on_event(ProtocolEvent::Report(i));
            Ok(report)
        })
        .into_iter()
        .collect::<Result<_>>()?;

    observer.on_event(ProtocolEvent::Assemble);
    let provenance = Provenance {
        config: *cfg,
        stream,
        split,
        node_map: None,
    };
    let noisy = match cfg.mechanism {
        Mechanism::NonprivPart => assemble_partial(g, &roles, provenance),
        Mechanism::LocalLap => assemble_local_lap(g, &roles, reports, split, provenance),
        _ => assemble_rows(g, &roles, reports, split, provenance),
    };
    Ok(match cfg.symmetrize {
        Symmetrize::None => noisy,
        mode => noisy.symmetrize(mode),
    })
}

fn assemble_rows(
    g: &Graph,
    roles: &RoleVector,
    reports: Vec<UserReport>,
    split: Option<BudgetSplit>,
    provenance: Provenance,
) -> NoisyGraph {
    let mut rows = Vec::with_capacity(reports.len());
    let mut users = Vec::with_capacity(reports.len());
    for (i, report) in reports.into_iter().enumerate() {
        let role = roles.get(i);
        match report {
            UserReport::Public(row) => {
                rows.push(row.into_bits());
                users.push(UserMeta::public(role));
            }
            UserReport::Dprr(r) => {
                users.push(UserMeta {
                    role,
                    d_star: Some(r.d_star),
                    q: Some(r.q),
                    p: Some(r.p),
                    epsilon: split.map(|s| s.effective_epsilon()),
                });
                rows.push(r.noisy.into_bits());
            }
            UserReport::Rr { noisy, p } => {
                users.push(UserMeta {
                    role,
                    d_star: None,
                    q: None,
                    p: Some(p),
                    epsilon: Some(provenance.config.epsilon),
                });
                rows.push(noisy.into_bits());
            }
            UserReport::Withheld | UserReport::LocalLap(_) => {
                unreachable!("handled by the dedicated assemblers")
            }
        }
    }
    let symmetric = !g.is_directed() && roles.count_non_private() == g.node_count();
    NoisyGraph::from_parts(rows, symmetric, users, provenance)
}

/// Keeps only non-private users and the edges among them, renumbered.
fn assemble_partial(g: &Graph, roles: &RoleVector, mut provenance: Provenance) -> NoisyGraph {
    let keep = roles.non_private();
    if keep.is_empty() {
        log::warn!("nonpriv-part with no non-private users yields an empty graph");
    }
    let (sub, map) = g.induced_subgraph(&keep);
    let rows = (0..sub.node_count()).map(|i| sub.neighbors(i).to_vec()).collect();
    let users = vec![UserMeta::public(Role::NonPrivate); sub.node_count()];
    provenance.node_map = Some(map);
    NoisyGraph::from_parts(rows, !g.is_directed(), users, provenance)
}

/// Edges reported by non-private users are taken as published; the
/// remaining budget `T - |published|` is filled with the best-scoring pairs
/// whose endpoints are both private.
fn assemble_local_lap(
    g: &Graph,
    roles: &RoleVector,
    reports: Vec<UserReport>,
    split: Option<BudgetSplit>,
    provenance: Provenance,
) -> NoisyGraph {
    let n = g.node_count();
    let mut d_stars = Vec::with_capacity(n);
    let mut users = Vec::with_capacity(n);
    let mut rows: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut published = 0usize;
    for (i, report) in reports.iter().enumerate() {
        match report {
            UserReport::Public(row) => {
                d_stars.push(row.degree() as f64);
                users.push(UserMeta::public(roles.get(i)));
                for &j in row.bits() {
                    // count each published edge once
                    if roles.is_private(j) || i < j {
                        published += 1;
                        rows[i].push(j);
                        rows[j].push(i);
                    }
                }
            }
            UserReport::LocalLap(r) => {
                d_stars.push(r.d_star);
                users.push(UserMeta {
                    role: roles.get(i),
                    d_star: Some(r.d_star),
                    q: None,
                    p: None,
                    epsilon: split.map(|s| s.effective_epsilon()),
                });
            }
            _ => unreachable!("LocalLap users send LocalLap reports"),
        }
    }
    let budget = edge_budget(&d_stars).saturating_sub(published);
    let scored = reports.iter().filter_map(|r| match r {
        UserReport::LocalLap(r) => Some(r.as_ref()),
        _ => None,
    });
    let scored = scored.flat_map(|r| {
        let i = r.owner();
        r.scores()
            .filter(|&(j, _)| roles.is_private(j))
            .map(move |(j, s)| (i, j, s))
    });
    for (i, j) in select_top_pairs(scored, budget) {
        rows[i].push(j);
        rows[j].push(i);
    }
    for r in &mut rows {
        r.sort_unstable();
        r.dedup();
    }
    NoisyGraph::from_parts(rows, true, users, provenance)
}
