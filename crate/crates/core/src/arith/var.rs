//! Global, append-only registry of polynomial variable names.
//!
//! A variable's registry index fixes its priority in the monomial order
//! (earlier index = larger in lex). The common names are registered up
//! front in a fixed order so canonical forms do not depend on which thread
//! happened to intern a name first.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(u32);

struct Registry {
    names: Vec<Arc<str>>,
    index: HashMap<Arc<str>, u32>,
}

const PRESEEDED: &[&str] = &[
    "x", "y", "z", "w", "u", "v", "s", "t", "p", "q", "a", "b", "c", "d", "x1", "x2", "y1",
    "y2", "t0", "t1", "t2", "t3", "t4", "t5", "t6", "t7", "t8", "th", "X", "Y", "Z", "W",
];

fn registry() -> &'static RwLock<Registry> {
    static REGISTRY: OnceLock<RwLock<Registry>> = OnceLock::new();
    REGISTRY.get_or_init(|| {
        let mut reg = Registry {
            names: Vec::new(),
            index: HashMap::new(),
        };
        for name in PRESEEDED {
            reg.intern(name);
        }
        RwLock::new(reg)
    })
}

impl Registry {
    fn intern(&mut self, name: &str) -> u32 {
        if let Some(&i) = self.index.get(name) {
            return i;
        }
        let i = self.names.len() as u32;
        let name: Arc<str> = Arc::from(name);
        self.names.push(name.clone());
        self.index.insert(name, i);
        i
    }
}

impl Var {
    pub fn new(name: &str) -> Var {
        if let Some(&i) = registry().read().expect("registry poisoned").index.get(name) {
            return Var(i);
        }
        Var(registry().write().expect("registry poisoned").intern(name))
    }

    pub fn name(&self) -> Arc<str> {
        registry().read().expect("registry poisoned").names[self.0 as usize].clone()
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}
