//! Interned external-id table.
//!
//! Ids are stored once in a single string arena; the hash table holds only
//! dense `u32` indices and hashes through the arena on lookup. At millions
//! of DOIs this halves memory compared to a `HashMap<String, u32>` plus an
//! index-ordered `Vec<String>`.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::hash::BuildHasher;

use hashbrown::hash_table::{Entry, HashTable};
use hashbrown::DefaultHashBuilder;

#[derive(Clone, Default)]
pub struct IdMap {
    arena: String,
    ends: Vec<usize>,
    table: HashTable<u32>,
    hasher: DefaultHashBuilder,
}

impl fmt::Debug for IdMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IdMap").field("len", &self.len()).finish()
    }
}

impl IdMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.ends.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ends.is_empty()
    }

    pub fn get(&self, index: usize) -> &str {
        let start = if index == 0 { 0 } else { self.ends[index - 1] };
        &self.arena[start..self.ends[index]]
    }

    pub fn lookup(&self, id: &str) -> Option<u32> {
        let hash = self.hasher.hash_one(id);
        self.table.find(hash, |&idx| self.get(idx as usize) == id).copied()
    }

    /// Inserts `id` at the next dense index. Returns `Err(existing)` when the
    /// id is already present.
    pub fn insert(&mut self, id: &str) -> Result<u32, u32> {
        let next = u32::try_from(self.ends.len()).expect("IdMap capacity exceeded");
        let hash = self.hasher.hash_one(id);
        let Self {
            arena,
            ends,
            table,
            hasher,
        } = self;
        let get = |idx: u32| {
            let idx = idx as usize;
            let start = if idx == 0 { 0 } else { ends[idx - 1] };
            &arena[start..ends[idx]]
        };
        match table.entry(hash, |&idx| get(idx) == id, |&idx| hasher.hash_one(get(idx))) {
            Entry::Occupied(e) => Err(*e.get()),
            Entry::Vacant(e) => {
                e.insert(next);
                arena.push_str(id);
                ends.push(arena.len());
                Ok(next)
            }
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> + '_ {
        (0..self.len()).map(move |i| self.get(i))
    }
}
