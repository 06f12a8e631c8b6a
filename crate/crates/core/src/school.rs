//! Top trading cycles with school capacities and priorities, and the same
//! market recast as a Shapley-Scarf economy with one house per seat.
//!
//! With priorities, a *school* points at the student it ranks highest. In
//! the Shapley-Scarf version each seat is owned by a student, the seats of a
//! school form one objective indifference class, and the owner-keyed
//! tie-breaking decides which seat a student points at. The two mechanisms
//! are not the same, which is what [`ttc_priorities`] vs
//! [`as_shapley_scarf`] demonstrate.

use itertools::Itertools;

use crate::domain::Partition;
use crate::error::{Error, Result};
use crate::market::{Allocation, Market};
use crate::preference::{AgentId, HouseId, PreferenceRelation};
use crate::tiebreak::TieBreakProfile;
use crate::ttc::ttc_fixed;
use crate::ttc::CycleSelection;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SchoolId(pub usize);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct School {
    pub capacity: usize,
    /// Students, highest priority first.
    pub priority: Vec<AgentId>,
}

/// Schools with capacities and priorities, students with strict
/// preferences over schools.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchoolMarket {
    schools: Vec<School>,
    /// Student preferences, best school first.
    students: Vec<Vec<SchoolId>>,
}

fn is_permutation<T: Copy + Ord>(items: &[T], n: usize, index: impl Fn(T) -> usize) -> bool {
    items.len() == n && items.iter().map(|&t| index(t)).sorted().eq(0..n)
}

impl SchoolMarket {
    pub fn new(schools: Vec<School>, students: Vec<Vec<SchoolId>>) -> Result<Self> {
        let (k, n) = (schools.len(), students.len());
        for (s, school) in schools.iter().enumerate() {
            if school.capacity == 0 {
                return Err(Error::Capacity(format!("school {s} has no seats")));
            }
            if !is_permutation(&school.priority, n, |a: AgentId| a.0) {
                return Err(Error::InvalidOrder(format!(
                    "priority of school {s} is not a permutation of the {n} students"
                )));
            }
        }
        for (i, prefs) in students.iter().enumerate() {
            if !is_permutation(prefs, k, |s: SchoolId| s.0) {
                return Err(Error::InvalidRelation(format!(
                    "student {i} does not rank every school exactly once"
                )));
            }
        }
        let seats: usize = schools.iter().map(|s| s.capacity).sum();
        if seats < n {
            return Err(Error::Capacity(format!("{seats} seats for {n} students")));
        }
        Ok(Self { schools, students })
    }

    pub fn schools(&self) -> &[School] {
        &self.schools
    }

    pub fn students(&self) -> &[Vec<SchoolId>] {
        &self.students
    }

    pub fn student_count(&self) -> usize {
        self.students.len()
    }

    /// Seat houses are numbered school-major: all seats of school 0, then
    /// school 1, and so on. Returns the first seat of each school.
    fn seat_offsets(&self) -> Vec<usize> {
        self.schools
            .iter()
            .scan(0, |acc, s| {
                let start = *acc;
                *acc += s.capacity;
                Some(start)
            })
            .collect()
    }

    /// School a seat house belongs to.
    pub fn school_of_seat(&self, seat: HouseId) -> SchoolId {
        let offsets = self.seat_offsets();
        SchoolId(
            offsets
                .iter()
                .rposition(|&o| o <= seat.0)
                .expect("seat in range"),
        )
    }
}

/// Capacity-constrained TTC. Students point at their favourite school with
/// seats left; schools point at their highest-priority unassigned student.
/// Returns each student's school.
pub fn ttc_priorities(sm: &SchoolMarket) -> Vec<SchoolId> {
    ttc_priorities_with(sm, CycleSelection::FromLowestAgent)
}

/// [`ttc_priorities`], starting each chase from the student `order` picks.
pub fn ttc_priorities_with(sm: &SchoolMarket, order: CycleSelection) -> Vec<SchoolId> {
    let n = sm.student_count();
    let mut remaining: Vec<usize> = sm.schools.iter().map(|s| s.capacity).collect();
    let mut assigned: Vec<Option<SchoolId>> = vec![None; n];
    let mut left = n;

    let student_points = |i: usize, remaining: &[usize]| -> SchoolId {
        *sm.students[i]
            .iter()
            .find(|s| remaining[s.0] > 0)
            .expect("capacity covers every student")
    };
    while left > 0 {
        let school_points = |s: SchoolId, assigned: &[Option<SchoolId>]| -> usize {
            sm.schools[s.0]
                .priority
                .iter()
                .find(|a| assigned[a.0].is_none())
                .expect("an unassigned student remains")
                .0
        };
        // Chase student -> school -> student.
        let mut unassigned = (0..n).filter(|&i| assigned[i].is_none());
        let start = match order {
            CycleSelection::FromLowestAgent => unassigned.next(),
            CycleSelection::FromHighestAgent => unassigned.next_back(),
        }
        .unwrap();
        let mut seen_at = vec![usize::MAX; n];
        let mut path = Vec::new();
        let mut i = start;
        while seen_at[i] == usize::MAX {
            seen_at[i] = path.len();
            path.push(i);
            i = school_points(student_points(i, &remaining), &assigned);
        }
        let trades: Vec<(usize, SchoolId)> = path[seen_at[i]..]
            .iter()
            .map(|&s| (s, student_points(s, &remaining)))
            .collect();
        for (student, school) in trades {
            assigned[student] = Some(school);
            remaining[school.0] -= 1;
            left -= 1;
        }
    }
    assigned.into_iter().map(Option::unwrap).collect()
}

/// The seat-copy Shapley-Scarf market.
#[derive(Clone, Debug)]
pub struct SeatMarket {
    pub market: Market,
    /// One block per school, holding its seats.
    pub partition: Partition,
}

/// Expands schools into seats. `seat_endowment[i]` is the school whose seat
/// student `i` owns; seats of one school go to its owners in student order.
pub fn seat_market(sm: &SchoolMarket, seat_endowment: &[SchoolId]) -> Result<SeatMarket> {
    let n = sm.student_count();
    if seat_endowment.len() != n {
        return Err(Error::LengthMismatch {
            what: "seat owners",
            expected: n,
            got: seat_endowment.len(),
        });
    }
    let seats: usize = sm.schools.iter().map(|s| s.capacity).sum();
    if seats != n {
        return Err(Error::NotBijection(format!(
            "{seats} seats cannot be owned one-to-one by {n} students"
        )));
    }
    let offsets = sm.seat_offsets();
    let mut used = vec![0usize; sm.schools.len()];
    let mut endowment = Vec::with_capacity(n);
    for (i, &s) in seat_endowment.iter().enumerate() {
        let school = sm.schools.get(s.0).ok_or_else(|| {
            Error::NotBijection(format!("student {i} owns unknown school {}", s.0))
        })?;
        if used[s.0] == school.capacity {
            return Err(Error::NotBijection(format!(
                "school {} has {} seats but more owners",
                s.0, school.capacity
            )));
        }
        endowment.push(HouseId(offsets[s.0] + used[s.0]));
        used[s.0] += 1;
    }
    let blocks: Vec<Vec<HouseId>> = sm
        .schools
        .iter()
        .zip(&offsets)
        .map(|(school, &o)| (o..o + school.capacity).map(HouseId).collect())
        .collect();
    let profile = sm
        .students
        .iter()
        .map(|prefs| PreferenceRelation::new(prefs.iter().map(|s| blocks[s.0].clone()).collect()))
        .collect::<Result<Vec<_>>>()?;
    Ok(SeatMarket {
        market: Market::new(endowment, profile)?,
        partition: Partition::new(blocks)?,
    })
}

/// Outcome of the seat-copy Shapley-Scarf mechanism.
#[derive(Clone, Debug)]
pub struct SeatOutcome {
    pub seats: SeatMarket,
    /// Seat allocation in the lifted market.
    pub allocation: Allocation,
    /// School of each student's seat.
    pub schools: Vec<SchoolId>,
}

/// Runs `TTC_tb` on the seat-copy market.
pub fn as_shapley_scarf(
    sm: &SchoolMarket,
    seat_endowment: &[SchoolId],
    tb: &TieBreakProfile,
) -> Result<SeatOutcome> {
    let seats = seat_market(sm, seat_endowment)?;
    let allocation = ttc_fixed(&seats.market, tb)?.allocation;
    let schools = allocation
        .houses()
        .iter()
        .map(|&h| sm.school_of_seat(h))
        .collect();
    Ok(SeatOutcome {
        seats,
        allocation,
        schools,
    })
}

/// Students grouped by assigned school, schools in order.
pub fn roster(sm: &SchoolMarket, assignment: &[SchoolId]) -> Vec<Vec<AgentId>> {
    let mut by_school = vec![Vec::new(); sm.schools.len()];
    for (i, s) in assignment.iter().enumerate() {
        by_school[s.0].push(AgentId(i));
    }
    by_school
}
