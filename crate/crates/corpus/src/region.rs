use std::collections::BTreeMap;

/// Contiguous token interval carrying metadata. `start` and `end` are
/// inclusive token positions; regions of one layer never overlap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructuralRegion {
    pub start: usize,
    pub end: usize,
    pub attrs: BTreeMap<String, String>,
}

impl StructuralRegion {
    pub fn contains(&self, pos: usize) -> bool {
        self.start <= pos && pos <= self.end
    }

    pub fn len(&self) -> usize {
        self.end - self.start + 1
    }

    pub fn is_empty(&self) -> bool {
        false // start <= end by construction
    }
}

/// Region covering `pos`, by binary search over start positions.
/// Regions must be sorted by `start` and non-overlapping.
pub fn region_at(regions: &[StructuralRegion], pos: usize) -> Option<&StructuralRegion> {
    let idx = regions.partition_point(|r| r.start <= pos);
    if idx == 0 {
        return None;
    }
    let r = &regions[idx - 1];
    r.contains(pos).then_some(r)
}
