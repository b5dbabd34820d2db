//! The refinable ordered partition `P` nested in the coarse partition `X`.
//!
//! Elements live in one permuted array; every `P`-part is a contiguous range
//! of it and every `X`-part a contiguous run of `P`-parts, so both part
//! orders are the array order. Moving an element between sibling pieces is a
//! swap. Per `(target, X-part)` pair a count record holds the number of live
//! edges from the `X`-part into the target; every live edge points at the
//! record of its source's `X`-part. Together these give the classic
//! three-way split in time proportional to the splitter's out-edges.

use std::collections::{BTreeSet, HashMap};

use crate::automaton::{Automaton, OrderedPartition, StateId};
use crate::error::{Error, Result};

const NONE: u32 = u32::MAX;

/// Edge pruning interleaved with the three-way split.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PruneMode {
    Off,
    /// For states reached from both sides of the split `X`-part, keep only
    /// the edges from the side that comes first.
    KeepFirst,
    /// Mirror image of `KeepFirst`: keep the edges from the later side.
    KeepLast,
}

/// Order of the initial in-label groups.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InitialOrder {
    /// `ε, a_1, …, a_k`.
    Ascending,
    /// `a_k, …, a_1, ε`.
    Descending,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PartId(pub u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct XPartId(pub u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Splitter {
    /// The compound `X`-part that was split; after selection it holds `S∖B`.
    pub s: XPartId,
    pub b: PartId,
    pub b_is_first: bool,
}

#[derive(Clone, Debug, Default)]
pub struct SplitReport {
    pub created: Vec<PartId>,
    pub deleted_edges: Vec<u32>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RefineStats {
    pub splitters: usize,
    /// Largest number of splitters any single state belonged to.
    pub max_splitters_per_state: u32,
    pub deleted_edges: usize,
}

#[derive(Clone, Copy, Debug)]
struct PartRec {
    begin: u32,
    end: u32,
    xpart: u32,
}

#[derive(Clone, Copy, Debug)]
struct XPartRec {
    begin: u32,
    end: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Class {
    Untouched,
    Only,  // D12: reached from B only
    Both,  // D11: reached from B and S∖B
    Dropped,
}

pub struct Refinement<'a> {
    a: &'a Automaton,

    elems: Vec<u32>,
    pos: Vec<u32>,
    part_of: Vec<u32>,
    parts: Vec<PartRec>,
    xparts: Vec<XPartRec>,
    /// Begin positions of the compound `X`-parts.
    compound: BTreeSet<u32>,

    /// Count record of every edge; `NONE` marks a deleted edge.
    edge_rec: Vec<u32>,
    counts: Vec<u32>,
    free_recs: Vec<u32>,

    // Live in-edge lists, only maintained when pruning.
    pruning: bool,
    in_start: Vec<u32>,
    in_len: Vec<u32>,
    in_ids: Vec<u32>,
    in_pos: Vec<u32>,

    // Scratch, reset after every split.
    snapshot: Vec<u32>,
    in_b: Vec<bool>,
    tmp_rec: Vec<u32>,
    s_rec: Vec<u32>,
    class: Vec<Class>,
    touched: Vec<u32>,
    part_touch: Vec<u32>,
    part_only: Vec<u32>,
    part_cursor: Vec<u32>,
    splitting: Vec<bool>,
    split_parts: Vec<u32>,
    report: SplitReport,

    splitter_count: Vec<u32>,
    stats: RefineStats,
    check: bool,
    mode: PruneMode,
}

impl<'a> Refinement<'a> {
    /// Sets up `P = ⟨Q_ε, Q_{a_1}, …, Q_{a_k}⟩` (or its reverse) and `X = ⟨Q⟩`.
    ///
    /// The automaton is expected to be input-consistent with a source
    /// without in-edges; callers validate. `mode` fixes whether the live
    /// in-edge lists needed for pruning are built.
    pub fn new(a: &'a Automaton, order: InitialOrder, mode: PruneMode) -> Self {
        let n = a.n();
        let m = a.num_edges();
        let sigma = a.sigma() as usize;

        // Group key: 0 for ε, letter + 1 otherwise.
        let key = |v: usize| -> usize {
            match a.in_label(StateId(v as u32)) {
                None => 0,
                Some(l) => l.index() + 1,
            }
        };
        let mut bucket = vec![0u32; sigma + 2];
        for v in 0..n {
            let k = match order {
                InitialOrder::Ascending => key(v),
                InitialOrder::Descending => sigma - key(v),
            };
            bucket[k + 1] += 1;
        }
        for k in 0..=sigma {
            bucket[k + 1] += bucket[k];
        }
        let mut elems = vec![0u32; n];
        let mut pos = vec![0u32; n];
        let mut fill = bucket.clone();
        for v in 0..n {
            let k = match order {
                InitialOrder::Ascending => key(v),
                InitialOrder::Descending => sigma - key(v),
            };
            let p = fill[k];
            fill[k] += 1;
            elems[p as usize] = v as u32;
            pos[v] = p;
        }
        let mut parts = Vec::with_capacity(sigma + 1);
        let mut part_of = vec![0u32; n];
        for k in 0..=sigma {
            let (b, e) = (bucket[k], bucket[k + 1]);
            if b < e {
                let id = parts.len() as u32;
                parts.push(PartRec {
                    begin: b,
                    end: e,
                    xpart: 0,
                });
                for &v in &elems[b as usize..e as usize] {
                    part_of[v as usize] = id;
                }
            }
        }
        let xparts = vec![XPartRec {
            begin: 0,
            end: n as u32,
        }];
        let mut compound = BTreeSet::new();
        if parts.len() > 1 {
            compound.insert(0);
        }

        let mut edge_rec = vec![NONE; m];
        let mut counts = Vec::with_capacity(n);
        for v in a.states() {
            let ins = a.in_edge_ids(v);
            if !ins.is_empty() {
                let rec = counts.len() as u32;
                counts.push(ins.len() as u32);
                for &e in ins {
                    edge_rec[e as usize] = rec;
                }
            }
        }

        let pruning = mode != PruneMode::Off;
        let (mut in_start, mut in_len, mut in_ids, mut in_pos) =
            (Vec::new(), Vec::new(), Vec::new(), Vec::new());
        if pruning {
            in_start.reserve(n);
            in_len.reserve(n);
            in_ids.reserve(m);
            in_pos.resize(m, 0);
            for v in a.states() {
                in_start.push(in_ids.len() as u32);
                let ins = a.in_edge_ids(v);
                in_len.push(ins.len() as u32);
                for &e in ins {
                    in_pos[e as usize] = in_ids.len() as u32;
                    in_ids.push(e);
                }
            }
        }

        Refinement {
            a,
            elems,
            pos,
            part_of,
            parts,
            xparts,
            compound,
            edge_rec,
            counts,
            free_recs: Vec::new(),
            pruning,
            in_start,
            in_len,
            in_ids,
            in_pos,
            snapshot: Vec::new(),
            in_b: vec![false; n],
            tmp_rec: vec![NONE; n],
            s_rec: vec![NONE; n],
            class: vec![Class::Untouched; n],
            touched: Vec::new(),
            part_touch: vec![0; n],
            part_only: vec![0; n],
            part_cursor: vec![0; n],
            splitting: vec![false; n],
            split_parts: Vec::new(),
            report: SplitReport::default(),
            splitter_count: vec![0; n],
            stats: RefineStats::default(),
            check: false,
            mode,
        }
    }

    /// Runs the full invariant scans after every split (small inputs only).
    pub fn set_invariant_checks(&mut self, on: bool) {
        self.check = on;
    }

    pub fn is_stable(&self) -> bool {
        self.compound.is_empty()
    }

    pub fn stats(&self) -> &RefineStats {
        &self.stats
    }

    pub fn num_parts(&self) -> usize {
        self.parts.len()
    }

    pub fn num_xparts(&self) -> usize {
        self.xparts.len()
    }

    pub fn part_size(&self, p: PartId) -> usize {
        let r = self.parts[p.0 as usize];
        (r.end - r.begin) as usize
    }

    /// Members of a `P`-part in array order.
    pub fn part_members(&self, p: PartId) -> Vec<StateId> {
        let r = self.parts[p.0 as usize];
        self.elems[r.begin as usize..r.end as usize]
            .iter()
            .map(|&v| StateId(v))
            .collect()
    }

    /// Members of an `X`-part in array order.
    pub fn xpart_members(&self, x: XPartId) -> Vec<StateId> {
        let r = self.xparts[x.0 as usize];
        self.elems[r.begin as usize..r.end as usize]
            .iter()
            .map(|&v| StateId(v))
            .collect()
    }

    pub fn part_of(&self, v: StateId) -> PartId {
        PartId(self.part_of[v.index()])
    }

    #[inline]
    fn xpart_of_state(&self, v: u32) -> u32 {
        self.parts[self.part_of[v as usize] as usize].xpart
    }

    fn is_compound(&self, x: &XPartRec) -> bool {
        self.part_of[self.elems[x.begin as usize] as usize]
            != self.part_of[self.elems[x.end as usize - 1] as usize]
    }

    fn alloc_rec(&mut self) -> u32 {
        match self.free_recs.pop() {
            Some(r) => {
                self.counts[r as usize] = 0;
                r
            }
            None => {
                self.counts.push(0);
                self.counts.len() as u32 - 1
            }
        }
    }

    #[inline]
    fn release_rec(&mut self, r: u32) {
        self.free_recs.push(r);
    }

    /// Picks the first compound `X`-part `S` and the smaller of its first and
    /// last `P`-parts as `B` (ties pick the first), then replaces `S` in `X`
    /// by `B, S∖B` or `S∖B, B`.
    pub fn select_splitter(&mut self) -> Result<Splitter> {
        let &sb = self
            .compound
            .iter()
            .next()
            .ok_or_else(|| Error::Contract("no compound X-part left".into()))?;
        self.compound.remove(&sb);
        let sx = self.xpart_of_state(self.elems[sb as usize]);
        let srec = self.xparts[sx as usize];
        let first = self.part_of[self.elems[srec.begin as usize] as usize];
        let last = self.part_of[self.elems[srec.end as usize - 1] as usize];
        debug_assert_ne!(first, last);
        let size = |p: u32| self.parts[p as usize].end - self.parts[p as usize].begin;
        let b_is_first = size(first) <= size(last);
        let b = if b_is_first { first } else { last };
        let brec = self.parts[b as usize];
        assert!(
            2 * (brec.end - brec.begin) <= srec.end - srec.begin,
            "splitter larger than half its X-part"
        );

        let nx = self.xparts.len() as u32;
        self.xparts.push(XPartRec {
            begin: brec.begin,
            end: brec.end,
        });
        self.parts[b as usize].xpart = nx;
        let rest = &mut self.xparts[sx as usize];
        if b_is_first {
            rest.begin = brec.end;
        } else {
            rest.end = brec.begin;
        }
        let rest = *rest;
        if self.is_compound(&rest) {
            self.compound.insert(rest.begin);
        }
        Ok(Splitter {
            s: XPartId(sx),
            b: PartId(b),
            b_is_first,
        })
    }

    fn delete_edge(&mut self, e: u32) {
        let eu = e as usize;
        let r = self.edge_rec[eu];
        debug_assert_ne!(r, NONE);
        self.counts[r as usize] -= 1;
        if self.counts[r as usize] == 0 {
            self.release_rec(r);
        }
        self.edge_rec[eu] = NONE;
        let x = self.a.edge(e).to.index();
        let start = self.in_start[x];
        let last_slot = start + self.in_len[x] - 1;
        let slot = self.in_pos[eu];
        let moved = self.in_ids[last_slot as usize];
        self.in_ids[slot as usize] = moved;
        self.in_pos[moved as usize] = slot;
        self.in_len[x] -= 1;
        self.report.deleted_edges.push(e);
        self.stats.deleted_edges += 1;
    }

    /// Deletes the live in-edges of `x` whose source is (`from_b`) or is not
    /// (`!from_b`) in the splitter snapshot.
    fn prune_in_edges(&mut self, x: u32, from_b: bool) {
        let start = self.in_start[x as usize];
        let mut i = 0;
        while i < self.in_len[x as usize] {
            let e = self.in_ids[(start + i) as usize];
            let src = self.a.edge(e).from.index();
            if self.in_b[src] == from_b {
                self.delete_edge(e); // swaps the last live edge into slot i
            } else {
                i += 1;
            }
        }
    }

    #[inline]
    fn swap_to(&mut self, x: u32, target: u32) {
        let from = self.pos[x as usize];
        if from != target {
            let y = self.elems[target as usize];
            self.elems.swap(from as usize, target as usize);
            self.pos[y as usize] = from;
            self.pos[x as usize] = target;
        }
    }

    fn new_part(&mut self, begin: u32, end: u32, xpart: u32) {
        let id = self.parts.len() as u32;
        self.parts.push(PartRec { begin, end, xpart });
        for i in begin..end {
            self.part_of[self.elems[i as usize] as usize] = id;
        }
        self.report.created.push(PartId(id));
    }

    /// Splits every `P`-part reached from the splitter into its non-empty
    /// pieces `D_12, D_11, D_2` (splitter first) or `D_2, D_11, D_12`
    /// (splitter last), pruning first when `mode` asks for it.
    pub fn three_way_split(&mut self, sp: Splitter, mode: PruneMode) -> &SplitReport {
        assert!(
            mode == PruneMode::Off || self.pruning,
            "pruning requested on a refinement built without in-edge lists"
        );
        self.report.created.clear();
        self.report.deleted_edges.clear();
        let a = self.a;
        let brec = self.parts[sp.b.0 as usize];
        self.snapshot.clear();
        self.snapshot
            .extend_from_slice(&self.elems[brec.begin as usize..brec.end as usize]);
        for &y in &self.snapshot {
            self.in_b[y as usize] = true;
            self.splitter_count[y as usize] += 1;
            self.stats.max_splitters_per_state =
                self.stats.max_splitters_per_state.max(self.splitter_count[y as usize]);
        }
        self.stats.splitters += 1;

        // δ(B′) with count(x, B).
        let edges = a.edges();
        for i in 0..self.snapshot.len() {
            let y = StateId(self.snapshot[i]);
            for e in a.out_edge_range(y) {
                if self.edge_rec[e as usize] == NONE {
                    continue;
                }
                let x = edges[e as usize].to.0;
                if self.tmp_rec[x as usize] == NONE {
                    let r = self.alloc_rec();
                    self.tmp_rec[x as usize] = r;
                    self.s_rec[x as usize] = self.edge_rec[e as usize];
                    self.touched.push(x);
                }
                self.counts[self.tmp_rec[x as usize] as usize] += 1;
            }
        }

        // Classify; D_12 iff count(x, B) = count(x, S).
        for i in 0..self.touched.len() {
            let x = self.touched[i];
            let xu = x as usize;
            let only =
                self.counts[self.tmp_rec[xu] as usize] == self.counts[self.s_rec[xu] as usize];
            let mut class = if only { Class::Only } else { Class::Both };
            if class == Class::Both && mode != PruneMode::Off {
                let delete_b_side = match mode {
                    PruneMode::KeepFirst => !sp.b_is_first,
                    PruneMode::KeepLast => sp.b_is_first,
                    PruneMode::Off => unreachable!(),
                };
                if delete_b_side {
                    self.prune_in_edges(x, true);
                    let r = std::mem::replace(&mut self.tmp_rec[xu], NONE);
                    self.release_rec(r);
                    class = Class::Dropped;
                } else {
                    self.prune_in_edges(x, false);
                    class = Class::Only;
                }
            }
            self.class[xu] = class;
        }

        // Group by part.
        for i in 0..self.touched.len() {
            let x = self.touched[i] as usize;
            let class = self.class[x];
            if class == Class::Dropped {
                continue;
            }
            let d = self.part_of[x] as usize;
            if self.part_touch[d] == 0 {
                self.split_parts.push(d as u32);
            }
            self.part_touch[d] += 1;
            if class == Class::Only {
                self.part_only[d] += 1;
            }
        }
        for i in 0..self.split_parts.len() {
            let d = self.split_parts[i] as usize;
            let size = self.parts[d].end - self.parts[d].begin;
            let n1 = self.part_touch[d];
            let n12 = self.part_only[d];
            let pieces = (n12 > 0) as u32 + (n1 > n12) as u32 + (size > n1) as u32;
            self.splitting[d] = pieces > 1;
        }

        // Move D_1 to the splitter side of D, then D_12 to the far end of D_1.
        for pass in 0..2 {
            for i in 0..self.touched.len() {
                let x = self.touched[i];
                let class = self.class[x as usize];
                if class == Class::Dropped || (pass == 1 && class != Class::Only) {
                    continue;
                }
                let d = self.part_of[x as usize] as usize;
                if !self.splitting[d] {
                    continue;
                }
                let off = self.part_cursor[d];
                self.part_cursor[d] += 1;
                let target = if sp.b_is_first {
                    self.parts[d].begin + off
                } else {
                    self.parts[d].end - 1 - off
                };
                self.swap_to(x, target);
            }
            for &d in &self.split_parts {
                self.part_cursor[d as usize] = 0;
            }
        }

        for i in 0..self.split_parts.len() {
            let d = self.split_parts[i] as usize;
            if self.splitting[d] {
                let PartRec { begin, end, xpart } = self.parts[d];
                let n1 = self.part_touch[d];
                let n12 = self.part_only[d];
                let n11 = n1 - n12;
                let n2 = end - begin - n1;
                // (begin, end) of D_12, D_11, D_2.
                let (r12, r11, r2) = if sp.b_is_first {
                    (
                        (begin, begin + n12),
                        (begin + n12, begin + n1),
                        (begin + n1, end),
                    )
                } else {
                    (
                        (end - n12, end),
                        (begin + n2, begin + n2 + n11),
                        (begin, begin + n2),
                    )
                };
                let keep = if n2 > 0 { r2 } else { r11 };
                self.parts[d].begin = keep.0;
                self.parts[d].end = keep.1;
                for r in [r12, r11, r2] {
                    if r.0 < r.1 && r != keep {
                        self.new_part(r.0, r.1, xpart);
                    }
                }
                let xb = self.xparts[xpart as usize].begin;
                self.compound.insert(xb);
            }
            self.part_touch[d] = 0;
            self.part_only[d] = 0;
            self.splitting[d] = false;
        }

        // Edges from B′ now count towards B.
        for i in 0..self.snapshot.len() {
            let y = StateId(self.snapshot[i]);
            for e in a.out_edge_range(y) {
                let eu = e as usize;
                let r = self.edge_rec[eu];
                if r == NONE {
                    continue;
                }
                let x = edges[eu].to.index();
                self.counts[r as usize] -= 1;
                if self.counts[r as usize] == 0 {
                    self.release_rec(r);
                }
                self.edge_rec[eu] = self.tmp_rec[x];
            }
        }

        for i in 0..self.touched.len() {
            let x = self.touched[i] as usize;
            self.tmp_rec[x] = NONE;
            self.s_rec[x] = NONE;
            self.class[x] = Class::Untouched;
        }
        self.touched.clear();
        self.split_parts.clear();
        for &y in &self.snapshot {
            self.in_b[y as usize] = false;
        }

        if self.check {
            if let Err(msg) = self.check_invariants() {
                panic!("refinement invariant violated: {msg}");
            }
        }
        &self.report
    }

    /// Refines until `P = X`.
    pub fn run(&mut self) {
        let mode = self.mode;
        while !self.compound.is_empty() {
            let sp = self.select_splitter().expect("compound part exists");
            self.three_way_split(sp, mode);
        }
    }

    pub fn snapshot_partition(&self) -> OrderedPartition {
        let mut parts = Vec::with_capacity(self.parts.len());
        let mut i = 0usize;
        while i < self.elems.len() {
            let r = self.parts[self.part_of[self.elems[i] as usize] as usize];
            let mut part: Vec<StateId> = self.elems[r.begin as usize..r.end as usize]
                .iter()
                .map(|&v| StateId(v))
                .collect();
            part.sort_unstable();
            parts.push(part);
            i = r.end as usize;
        }
        OrderedPartition::from_parts_unchecked(parts)
    }

    #[inline]
    pub fn is_edge_alive(&self, e: u32) -> bool {
        self.edge_rec[e as usize] != NONE
    }

    /// Ids of the edges not deleted by pruning.
    pub fn live_edge_ids(&self) -> impl Iterator<Item = u32> + '_ {
        (0..self.edge_rec.len() as u32).filter(move |&e| self.is_edge_alive(e))
    }

    /// Full scan of the structural, count, and stability invariants.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        let n = self.elems.len();
        let a = self.a;
        for (i, &v) in self.elems.iter().enumerate() {
            if self.pos[v as usize] as usize != i {
                return Err(format!("pos of {v} is stale"));
            }
        }
        // P-parts tile the array; X-parts tile it in runs of P-parts.
        let mut i = 0usize;
        let mut live_parts = 0usize;
        while i < n {
            let pid = self.part_of[self.elems[i] as usize];
            let r = self.parts[pid as usize];
            if r.begin as usize != i || r.end <= r.begin {
                return Err(format!("part {pid} has bad range {}..{}", r.begin, r.end));
            }
            for &v in &self.elems[r.begin as usize..r.end as usize] {
                if self.part_of[v as usize] != pid {
                    return Err(format!("state {v} has a stale part link"));
                }
            }
            let x = self.xparts[r.xpart as usize];
            if r.begin < x.begin || r.end > x.end {
                return Err(format!("part {pid} sticks out of its X-part"));
            }
            live_parts += 1;
            i = r.end as usize;
        }
        if live_parts != self.parts.len() {
            return Err("dead part records".into());
        }
        let mut i = 0usize;
        let mut expected_compound = BTreeSet::new();
        while i < n {
            let xid = self.xpart_of_state(self.elems[i]);
            let x = self.xparts[xid as usize];
            if x.begin as usize != i {
                return Err(format!("X-part {xid} has bad range"));
            }
            for &v in &self.elems[x.begin as usize..x.end as usize] {
                if self.xpart_of_state(v) != xid {
                    return Err(format!("state {v} in X-part range of {xid} links elsewhere"));
                }
            }
            if self.is_compound(&x) {
                expected_compound.insert(x.begin);
            }
            i = x.end as usize;
        }
        if expected_compound != self.compound {
            return Err("compound queue differs from the compound X-parts".into());
        }

        // Counts: every live edge (y, x) points at the shared record of
        // (x, X-part of y), holding the live edge count of that pair.
        let mut expected: HashMap<(u32, u32), u32> = HashMap::new();
        let mut rec_of: HashMap<(u32, u32), u32> = HashMap::new();
        for e in self.live_edge_ids() {
            let ed = a.edge(e);
            let key = (ed.to.0, self.xpart_of_state(ed.from.0));
            *expected.entry(key).or_default() += 1;
            let r = self.edge_rec[e as usize];
            if *rec_of.entry(key).or_insert(r) != r {
                return Err(format!("edges into {} from one X-part use two records", ed.to));
            }
        }
        for (key, cnt) in &expected {
            let r = rec_of[key];
            if self.counts[r as usize] != *cnt {
                return Err(format!(
                    "count record for target {} is {}, expected {cnt}",
                    key.0, self.counts[r as usize]
                ));
            }
        }

        // Forward stability of every P-part w.r.t. every X-part.
        let mut hit = vec![false; n];
        let mut i = 0usize;
        while i < n {
            let xid = self.xpart_of_state(self.elems[i]);
            let x = self.xparts[xid as usize];
            hit.iter_mut().for_each(|h| *h = false);
            for &y in &self.elems[x.begin as usize..x.end as usize] {
                for &e in a.out_edge_ids(StateId(y)) {
                    if self.is_edge_alive(e) {
                        hit[a.edge(e).to.index()] = true;
                    }
                }
            }
            for p in &self.parts {
                let c = self.elems[p.begin as usize..p.end as usize]
                    .iter()
                    .filter(|&&v| hit[v as usize])
                    .count();
                if c != 0 && c != (p.end - p.begin) as usize {
                    return Err(format!(
                        "a P-part is not forward-stable w.r.t. X-part {xid}"
                    ));
                }
            }
            i = x.end as usize;
        }

        if self.pruning {
            // Live in-edges come from one X-part, which never lies after the
            // X-part of any original in-edge (before it, for KeepLast).
            for v in a.states() {
                let vu = v.index();
                let start = self.in_start[vu] as usize;
                let live = &self.in_ids[start..start + self.in_len[vu] as usize];
                let Some(&first) = live.first() else { continue };
                let xp = self.xpart_of_state(a.edge(first).from.0);
                if live
                    .iter()
                    .any(|&e| self.xpart_of_state(a.edge(e).from.0) != xp)
                {
                    return Err(format!("live in-edges of {v} come from several X-parts"));
                }
                let kept_begin = self.xparts[xp as usize].begin;
                for e in a.in_edges(v) {
                    let other = self.xparts[self.xpart_of_state(e.from.0) as usize].begin;
                    let ok = match self.mode {
                        PruneMode::KeepLast => other <= kept_begin,
                        _ => kept_begin <= other,
                    };
                    if !ok {
                        return Err(format!("kept in-edges of {v} come from a later X-part"));
                    }
                }
            }
        }
        Ok(())
    }

    /// For every state, its live in-edges (only meaningful when pruning).
    pub(crate) fn live_in_edges(&self, v: StateId) -> &[u32] {
        let s = self.in_start[v.index()] as usize;
        &self.in_ids[s..s + self.in_len[v.index()] as usize]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::{Automaton, Edge};

    fn merge_nfa() -> Automaton {
        Automaton::from_triples(
            5,
            2,
            0,
            &[(0, 1, 0), (0, 2, 0), (0, 3, 1), (1, 3, 1), (1, 4, 1), (2, 3, 1), (2, 4, 1)],
        )
        .unwrap()
    }

    fn loop_dfa() -> Automaton {
        Automaton::from_triples(3, 2, 0, &[(0, 1, 1), (1, 2, 0), (2, 2, 0)]).unwrap()
    }

    fn ids(p: &OrderedPartition) -> Vec<Vec<u32>> {
        p.parts()
            .iter()
            .map(|q| q.iter().map(|v| v.0).collect())
            .collect()
    }

    /// A star s → 1..=k on one letter followed by chains of varying length
    /// so that the first X-part has P-parts with chosen sizes.
    fn sized_groups(sizes: &[usize]) -> Automaton {
        // Group g gets in-letter g; sizes[g] states reached from the source.
        let mut triples = Vec::new();
        let mut next = 1u32;
        for (g, &k) in sizes.iter().enumerate() {
            for _ in 0..k {
                triples.push((0, next, g as u32));
                next += 1;
            }
        }
        Automaton::from_triples(next as usize, sizes.len() as u32, 0, &triples).unwrap()
    }

    #[test]
    fn init_merge_nfa() {
        let a = merge_nfa();
        let r = Refinement::new(&a, InitialOrder::Ascending, PruneMode::Off);
        assert_eq!(ids(&r.snapshot_partition()), vec![vec![0], vec![1, 2], vec![3, 4]]);
        assert_eq!(r.num_xparts(), 1);
        assert!(!r.is_stable());
        r.check_invariants().unwrap();
    }

    #[test]
    fn init_loop_dfa() {
        let a = loop_dfa();
        let r = Refinement::new(&a, InitialOrder::Ascending, PruneMode::Off);
        assert_eq!(ids(&r.snapshot_partition()), vec![vec![0], vec![2], vec![1]]);
        let r = Refinement::new(&a, InitialOrder::Descending, PruneMode::Off);
        assert_eq!(ids(&r.snapshot_partition()), vec![vec![1], vec![2], vec![0]]);
    }

    #[test]
    fn two_state_path() {
        let a = Automaton::from_triples(2, 1, 0, &[(0, 1, 0)]).unwrap();
        let mut r = Refinement::new(&a, InitialOrder::Ascending, PruneMode::Off);
        assert_eq!(ids(&r.snapshot_partition()), vec![vec![0], vec![1]]);
        r.run();
        assert_eq!(ids(&r.snapshot_partition()), vec![vec![0], vec![1]]);
        assert_eq!(r.stats().splitters, 1);
    }

    #[test]
    fn path_init_snapshot() {
        let a = crate::automaton::path_dfa(&[crate::automaton::Letter(0), crate::automaton::Letter(1)])
            .unwrap();
        let r = Refinement::new(&a, InitialOrder::Ascending, PruneMode::Off);
        assert_eq!(ids(&r.snapshot_partition()), vec![vec![0], vec![1], vec![2]]);
    }

    #[test]
    fn splitter_is_smaller_end_part() {
        // Parts inside Q: {s}, then groups of sizes 3, 5, 2 → sizes ⟨1,3,5,2⟩.
        // First selection: first {s} (1) vs last (2) → first.
        let a = sized_groups(&[3, 5, 2]);
        let mut r = Refinement::new(&a, InitialOrder::Ascending, PruneMode::Off);
        let sp = r.select_splitter().unwrap();
        assert!(sp.b_is_first);
        assert_eq!(r.part_size(sp.b), 1);
        r.three_way_split(sp, PruneMode::Off);
        // Now S∖B = ⟨3, 5, 2⟩: last part (2) is smaller.
        let sp = r.select_splitter().unwrap();
        assert!(!sp.b_is_first);
        assert_eq!(r.part_size(sp.b), 2);
    }

    #[test]
    fn splitter_tie_prefers_first() {
        let a = sized_groups(&[2, 5, 2]);
        let mut r = Refinement::new(&a, InitialOrder::Ascending, PruneMode::Off);
        let sp = r.select_splitter().unwrap();
        r.three_way_split(sp, PruneMode::Off);
        let sp = r.select_splitter().unwrap();
        assert!(sp.b_is_first);
        assert_eq!(r.part_size(sp.b), 2);
        assert_eq!(
            r.part_members(sp.b),
            vec![StateId(1), StateId(2)]
        );
    }

    #[test]
    fn empty_queue_is_a_contract_violation() {
        let a = Automaton::from_triples(2, 1, 0, &[(0, 1, 0)]).unwrap();
        let mut r = Refinement::new(&a, InitialOrder::Ascending, PruneMode::Off);
        r.run();
        assert!(matches!(r.select_splitter(), Err(Error::Contract(_))));
    }

    #[test]
    fn loop_dfa_first_round_selects_source() {
        let a = loop_dfa();
        let mut r = Refinement::new(&a, InitialOrder::Ascending, PruneMode::KeepFirst);
        let sp = r.select_splitter().unwrap();
        assert_eq!(r.xpart_members(XPartId(sp.s.0)), vec![StateId(2), StateId(1)]);
        assert_eq!(r.part_members(sp.b), vec![StateId(0)]);
        assert!(sp.b_is_first);
    }

    #[test]
    fn merge_nfa_source_splitter() {
        let a = merge_nfa();
        let mut r = Refinement::new(&a, InitialOrder::Ascending, PruneMode::Off);
        r.set_invariant_checks(true);
        let sp = r.select_splitter().unwrap();
        assert_eq!(r.part_members(sp.b), vec![StateId(0)]);
        let rep = r.three_way_split(sp, PruneMode::Off);
        assert_eq!(rep.created.len(), 1);
        assert_eq!(
            ids(&r.snapshot_partition()),
            vec![vec![0], vec![1, 2], vec![3], vec![4]]
        );
        r.run();
        assert_eq!(
            ids(&r.snapshot_partition()),
            vec![vec![0], vec![1, 2], vec![3], vec![4]]
        );
    }

    #[test]
    fn unsplit_part_fully_reached_from_b_only() {
        // Source alone reaches {1,2}: D_12 = D, nothing created.
        let a = Automaton::from_triples(3, 1, 0, &[(0, 1, 0), (0, 2, 0)]).unwrap();
        let mut r = Refinement::new(&a, InitialOrder::Ascending, PruneMode::Off);
        let sp = r.select_splitter().unwrap();
        assert!(r.three_way_split(sp, PruneMode::Off).created.is_empty());
        assert!(r.is_stable());
    }

    #[test]
    fn loop_dfa_round_two_prunes_edge_into_loop() {
        let a = loop_dfa();
        let mut r = Refinement::new(&a, InitialOrder::Ascending, PruneMode::KeepFirst);
        r.set_invariant_checks(true);
        let sp = r.select_splitter().unwrap();
        assert!(r.three_way_split(sp, PruneMode::KeepFirst).deleted_edges.is_empty());
        let sp = r.select_splitter().unwrap();
        assert_eq!(r.part_members(sp.b), vec![StateId(2)]);
        assert!(sp.b_is_first);
        let rep = r.three_way_split(sp, PruneMode::KeepFirst).clone();
        let deleted: Vec<Edge> = rep.deleted_edges.iter().map(|&e| *a.edge(e)).collect();
        assert_eq!(deleted, vec![Edge::new(1, 2, 0)]);
        assert!(rep.created.is_empty());
        assert!(r.is_stable());
    }

    #[test]
    fn invariants_hold_on_random_nfas() {
        for seed in 0..300 {
            let n = 2 + (seed as usize % 40);
            let a = crate::gen::gen_random_nfa(n, 3 * n, 1 + (seed % 3) as u32, seed).unwrap();
            for mode in [PruneMode::Off, PruneMode::KeepFirst, PruneMode::KeepLast] {
                let mut r = Refinement::new(&a, InitialOrder::Ascending, mode);
                r.set_invariant_checks(true);
                r.check_invariants().unwrap();
                r.run();
                let log = (n as f64).log2().floor() as u32 + 1;
                assert!(r.stats().max_splitters_per_state <= log);
            }
        }
    }
}
