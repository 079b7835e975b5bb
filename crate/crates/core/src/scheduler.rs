//! Per-cycle photon scheduling under fast-to-slow, top-to-down driving.
//!
//! Within one pump cycle the output train has `m` slots of period `T`. Photons
//! carried over from the previous cycle leave first. New heralded photons then
//! take the remaining slots, with lower delays going to sources nearer the top
//! of the array, so delays strictly increase down the array and every switch
//! flips at most once per cycle. Surplus photons go into the long delay lines
//! (delays `m..2^K`) for the next cycle, and whatever is left is routed out.

use crate::emission::HeraldReport;
use crate::error::{domain, Error, Result};
use crate::topology::RegisterTopology;

/// A photon held in the long delay lines until the next cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StoredPhoton {
    pub multiplicity: u32,
    /// Register delay it was given, in `[m, 2^K)`; stored photon `k` was given
    /// delay `m + k` and leaves in slot `k` of the next cycle.
    pub delay: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StorageState {
    pub stored: Vec<StoredPhoton>,
    pub capacity: u32,
}

impl StorageState {
    pub fn empty(capacity: u32) -> Self {
        Self { stored: Vec::new(), capacity }
    }

    /// Storage holding single-pair photons, as they would have been stored by
    /// the previous cycle at frequency multiple `multiple`.
    pub fn with_singles(count: u32, capacity: u32, multiple: u32) -> Self {
        let stored = (0..count).map(|k| StoredPhoton { multiplicity: 1, delay: multiple + k }).collect();
        Self { stored, capacity }
    }

    pub fn level(&self) -> usize {
        self.stored.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhotonOrigin {
    /// Emitted this cycle by a 1-based source.
    Source(usize),
    /// Released from storage.
    Stored,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SlotPhoton {
    pub origin: PhotonOrigin,
    pub multiplicity: u32,
    /// Register delay in units of `T`.
    pub delay: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclePlan {
    pub slot_fill: Vec<Option<SlotPhoton>>,
    pub storage_out: StorageState,
    /// `(source, delay)` for new photons sent to storage.
    pub stored_from: Vec<(usize, u32)>,
    pub discarded: u32,
    pub lack_count: u32,
    pub multi_count: u32,
}

impl CyclePlan {
    pub fn filled(&self) -> u32 {
        self.slot_fill.len() as u32 - self.lack_count
    }

    /// `(source, delay)` of every newly emitted photon kept in the structure,
    /// slots and storage alike, sorted by source.
    pub fn new_photon_assignments(&self) -> Vec<(usize, u32)> {
        let mut out: Vec<(usize, u32)> = self
            .slot_fill
            .iter()
            .flatten()
            .filter_map(|p| match p.origin {
                PhotonOrigin::Source(i) => Some((i, p.delay)),
                PhotonOrigin::Stored => None,
            })
            .chain(self.stored_from.iter().copied())
            .collect();
        out.sort_unstable();
        out
    }

    /// `heralds_in + stored_in = filled + stored_out + discarded`.
    pub fn conserves(&self, heralds_in: usize, stored_in: usize) -> bool {
        heralds_in + stored_in
            == self.filled() as usize + self.storage_out.level() + self.discarded as usize
    }
}

fn check_inputs(
    topology: &RegisterTopology,
    report: &HeraldReport,
    storage_in: &StorageState,
    multiple: u32,
) -> Result<u32> {
    let capacity = topology.storage_capacity(multiple)?;
    if report.source_count() != topology.source_count() {
        return Err(domain(format!(
            "herald report covers {} sources, register has {}",
            report.source_count(),
            topology.source_count()
        )));
    }
    if storage_in.level() > capacity as usize {
        return Err(domain(format!(
            "storage holds {} photons, capacity at multiple {multiple} is {capacity}",
            storage_in.level()
        )));
    }
    Ok(capacity)
}

/// Releases up to `multiple` stored photons into the first slots; any beyond
/// that stay in storage, ahead of this cycle's photons.
fn release_storage(storage_in: &StorageState, multiple: u32) -> (Vec<Option<SlotPhoton>>, Vec<u32>) {
    let mut slots = vec![None; multiple as usize];
    for (slot, p) in slots.iter_mut().zip(&storage_in.stored) {
        *slot = Some(SlotPhoton { origin: PhotonOrigin::Stored, multiplicity: p.multiplicity, delay: p.delay });
    }
    let carried = storage_in.stored.iter().skip(multiple as usize).map(|p| p.multiplicity).collect();
    (slots, carried)
}

/// Stores surplus sources top-to-bottom at delays `m, m+1, ...`; a source
/// that cannot reach the next storage delay, or arrives once storage is full,
/// is routed out.
fn store_surplus(
    topology: &RegisterTopology,
    report: &HeraldReport,
    carried: Vec<u32>,
    surplus: impl Iterator<Item = usize>,
    multiple: u32,
    capacity: u32,
) -> (StorageState, Vec<(usize, u32)>, u32) {
    let mut storage_out = StorageState::empty(capacity);
    for (k, multiplicity) in carried.into_iter().enumerate() {
        storage_out.stored.push(StoredPhoton { multiplicity, delay: multiple + k as u32 });
    }
    let mut stored_from = Vec::new();
    let mut discarded = 0;
    for source in surplus {
        let target = multiple + storage_out.level() as u32;
        if (storage_out.level() as u32) < capacity && topology.can_reach(source, target) {
            storage_out.stored.push(StoredPhoton { multiplicity: report.multiplicity[source - 1], delay: target });
            stored_from.push((source, target));
        } else {
            discarded += 1;
        }
    }
    (storage_out, stored_from, discarded)
}

fn first_free_slot(storage_in: &StorageState, multiple: u32) -> u32 {
    (storage_in.level() as u32).min(multiple)
}

fn tally(slot_fill: Vec<Option<SlotPhoton>>, storage_out: StorageState, stored_from: Vec<(usize, u32)>, discarded: u32) -> CyclePlan {
    let lack_count = slot_fill.iter().filter(|s| s.is_none()).count() as u32;
    let multi_count = slot_fill.iter().flatten().filter(|p| p.multiplicity >= 2).count() as u32;
    CyclePlan { slot_fill, storage_out, stored_from, discarded, lack_count, multi_count }
}

/// Plans one pump cycle.
///
/// Slots are processed in increasing order. For each slot the heralded sources
/// below the last one used are scanned top-to-bottom and the first that can
/// reach the slot's delay takes it; sources passed over on the way are routed
/// out, since any later slot would break the delay ordering. Only the
/// `heralded` flags drive decisions.
pub fn plan_cycle(
    topology: &RegisterTopology,
    report: &HeraldReport,
    storage_in: &StorageState,
    multiple: u32,
) -> Result<CyclePlan> {
    let capacity = check_inputs(topology, report, storage_in, multiple)?;
    let heralded: Vec<usize> = (1..=report.source_count()).filter(|&i| report.heralded[i - 1]).collect();

    let (mut slot_fill, carried) = release_storage(storage_in, multiple);
    let mut cursor = 0;
    let mut discarded = 0u32;
    for slot in first_free_slot(storage_in, multiple)..multiple {
        if let Some(offset) = heralded[cursor..].iter().position(|&src| topology.can_reach(src, slot)) {
            let source = heralded[cursor + offset];
            slot_fill[slot as usize] = Some(SlotPhoton {
                origin: PhotonOrigin::Source(source),
                multiplicity: report.multiplicity[source - 1],
                delay: slot,
            });
            discarded += offset as u32;
            cursor += offset + 1;
        }
    }

    let (storage_out, stored_from, dropped) =
        store_surplus(topology, report, carried, heralded[cursor..].iter().copied(), multiple, capacity);
    Ok(tally(slot_fill, storage_out, stored_from, discarded + dropped))
}

/// Largest instance `plan_cycle_optimal` accepts.
pub const OPTIMAL_MAX_SOURCES: usize = 20;
pub const OPTIMAL_MAX_MULTIPLE: u32 = 8;

/// Like [`plan_cycle`], but fills the slots with a maximum-cardinality
/// matching between heralded sources and free slots, ignoring the delay
/// ordering. Test oracle for the greedy rule.
pub fn plan_cycle_optimal(
    topology: &RegisterTopology,
    report: &HeraldReport,
    storage_in: &StorageState,
    multiple: u32,
) -> Result<CyclePlan> {
    if topology.source_count() > OPTIMAL_MAX_SOURCES || multiple > OPTIMAL_MAX_MULTIPLE {
        return Err(Error::TooLarge(format!(
            "{} sources, multiple {multiple} (limit {OPTIMAL_MAX_SOURCES} sources, multiple {OPTIMAL_MAX_MULTIPLE})",
            topology.source_count()
        )));
    }
    let capacity = check_inputs(topology, report, storage_in, multiple)?;
    let heralded: Vec<usize> = (1..=report.source_count()).filter(|&i| report.heralded[i - 1]).collect();
    let free: Vec<u32> = (first_free_slot(storage_in, multiple)..multiple).collect();

    // Kuhn's augmenting paths; slot_owner[j] indexes into `heralded`.
    let mut slot_owner: Vec<Option<usize>> = vec![None; free.len()];
    for h in 0..heralded.len() {
        let mut seen = vec![false; free.len()];
        augment(topology, &heralded, &free, h, &mut seen, &mut slot_owner);
    }

    let (mut slot_fill, carried) = release_storage(storage_in, multiple);
    let mut used = vec![false; heralded.len()];
    for (j, owner) in slot_owner.iter().enumerate() {
        if let Some(h) = *owner {
            used[h] = true;
            let source = heralded[h];
            slot_fill[free[j] as usize] = Some(SlotPhoton {
                origin: PhotonOrigin::Source(source),
                multiplicity: report.multiplicity[source - 1],
                delay: free[j],
            });
        }
    }
    let surplus = heralded.iter().zip(&used).filter(|(_, &u)| !u).map(|(&s, _)| s);
    let (storage_out, stored_from, discarded) = store_surplus(topology, report, carried, surplus, multiple, capacity);
    Ok(tally(slot_fill, storage_out, stored_from, discarded))
}

fn augment(
    topology: &RegisterTopology,
    heralded: &[usize],
    free: &[u32],
    h: usize,
    seen: &mut [bool],
    slot_owner: &mut [Option<usize>],
) -> bool {
    for j in 0..free.len() {
        if seen[j] || !topology.can_reach(heralded[h], free[j]) {
            continue;
        }
        seen[j] = true;
        let reassignable = match slot_owner[j] {
            None => true,
            Some(other) => augment(topology, heralded, free, other, seen, slot_owner),
        };
        if reassignable {
            slot_owner[j] = Some(h);
            return true;
        }
    }
    false
}
