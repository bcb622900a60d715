use rand::seq::index::sample;
use serde::{Deserialize, Serialize};

use crate::rng::RngStream;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Private,
    NonPrivate,
}

/// Role of every node of one graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoleVector(Vec<Role>);

impl RoleVector {
    pub fn all(n: usize, role: Role) -> Self {
        Self(vec![role; n])
    }

    pub fn get(&self, i: usize) -> Role {
        self.0[i]
    }

    pub fn is_private(&self, i: usize) -> bool {
        self.0[i] == Role::Private
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn non_private(&self) -> Vec<usize> {
        (0..self.0.len()).filter(|&i| !self.is_private(i)).collect()
    }

    pub fn count_non_private(&self) -> usize {
        self.0.iter().filter(|&&r| r == Role::NonPrivate).count()
    }

    pub fn as_slice(&self) -> &[Role] {
        &self.0
    }
}

/// Flags `round(rho * n)` users, chosen uniformly without replacement, as
/// non-private.
pub fn assign_roles(n: usize, rho: f64, stream: RngStream) -> RoleVector {
    let k = ((rho.clamp(0.0, 1.0) * n as f64).round() as usize).min(n);
    let mut roles = vec![Role::Private; n];
    if k == n {
        roles.fill(Role::NonPrivate);
    } else if k > 0 {
        let mut rng = stream.rng();
        for i in sample(&mut rng, n, k) {
            roles[i] = Role::NonPrivate;
        }
    }
    RoleVector(roles)
}
