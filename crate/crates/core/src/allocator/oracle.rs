//! Brute-force optimum for small instances.

use crate::error::{Error, Result};
use crate::link::ReportSet;

pub const ORACLE_MAX_USERS: usize = 4;
pub const ORACLE_MAX_GROUPS: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleSolution {
    /// Largest achievable sum of group rates.
    pub sum_rate: f64,
    /// One optimal owner per group (first found in lexicographic search order).
    pub owner: Vec<Option<usize>>,
}

/// Enumerates every assignment of groups to reporting users in which user
/// `k` owns at most `caps[k]` groups, and returns the best sum rate.
///
/// Leaving a group free is part of the search; with non-negative rates the
/// optimum is always reached by an assignment that cannot be extended.
pub fn oracle_exhaustive(reports: &ReportSet, caps: &[usize]) -> Result<OracleSolution> {
    let (users, groups) = (reports.users(), reports.groups());
    if users > ORACLE_MAX_USERS || groups > ORACLE_MAX_GROUPS {
        return Err(Error::TooLarge {
            users,
            groups,
            max_users: ORACLE_MAX_USERS,
            max_groups: ORACLE_MAX_GROUPS,
        });
    }
    if caps.len() != users {
        return Err(Error::Dimension {
            expected: format!("{users} caps"),
            got: caps.len().to_string(),
        });
    }
    let mut search = Search {
        reports,
        left: caps.to_vec(),
        current: vec![None; groups],
        best: OracleSolution {
            sum_rate: f64::NEG_INFINITY,
            owner: vec![None; groups],
        },
    };
    search.descend(0, 0.0);
    Ok(search.best)
}

struct Search<'a> {
    reports: &'a ReportSet,
    left: Vec<usize>,
    current: Vec<Option<usize>>,
    best: OracleSolution,
}

impl Search<'_> {
    fn descend(&mut self, group: usize, acc: f64) {
        if group == self.current.len() {
            if acc > self.best.sum_rate {
                self.best.sum_rate = acc;
                self.best.owner.clone_from(&self.current);
            }
            return;
        }
        for user in 0..self.reports.users() {
            if self.left[user] == 0 || !self.reports.is_reported(user, group) {
                continue;
            }
            self.left[user] -= 1;
            self.current[group] = Some(user);
            self.descend(group + 1, acc + self.reports.group_rate(user, group));
            self.left[user] += 1;
        }
        self.current[group] = None;
        self.descend(group + 1, acc);
    }
}
