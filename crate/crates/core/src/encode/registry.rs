use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::algebra::VarId;
use crate::error::{Error, Result};

/// Which family a Boolean variable belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BitClass {
    /// bits of 𝔽_p variables
    XBit,
    /// bits of bounded integer variables
    YBit,
    /// bits of quadratization chain variables
    VBit,
    /// multiple counters of modular lifts
    UBit,
    /// inequality slacks
    GBit,
    /// objective window bits
    FBit,
    /// error indicators
    HBit,
    Aux,
}

impl BitClass {
    pub fn prefix(self) -> &'static str {
        match self {
            BitClass::XBit => "X",
            BitClass::YBit => "Y",
            BitClass::VBit => "V",
            BitClass::UBit => "U",
            BitClass::GBit => "G",
            BitClass::FBit => "F",
            BitClass::HBit => "H",
            BitClass::Aux => "A",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoolVar {
    pub id: VarId,
    pub name: String,
    pub class: BitClass,
    /// (variable id, bit index) this bit was created for
    pub origin: Option<(VarId, u32)>,
}

/// Dense list of Boolean variables; ids are positions.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Registry {
    vars: Vec<BoolVar>,
    by_name: HashMap<String, VarId>,
}

impl Registry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn fresh(&mut self, class: BitClass, origin: Option<(VarId, u32)>, name: String) -> VarId {
        let id = self.vars.len() as VarId;
        let mut name = name;
        if self.by_name.contains_key(&name) {
            let mut k = 1;
            while self.by_name.contains_key(&format!("{name}#{k}")) {
                k += 1;
            }
            name = format!("{name}#{k}");
        }
        self.by_name.insert(name.clone(), id);
        self.vars.push(BoolVar { id, name, class, origin });
        id
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn get(&self, id: VarId) -> &BoolVar {
        &self.vars[id as usize]
    }

    pub fn name(&self, id: VarId) -> String {
        self.vars.get(id as usize).map_or_else(|| format!("?{id}"), |v| v.name.clone())
    }

    pub fn lookup(&self, name: &str) -> Option<VarId> {
        self.by_name.get(name).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = &BoolVar> {
        self.vars.iter()
    }

    pub fn count(&self, class: BitClass) -> usize {
        self.vars.iter().filter(|v| v.class == class).count()
    }

    pub fn from_vars(vars: Vec<BoolVar>) -> Result<Self> {
        let mut reg = Registry::new();
        for (i, v) in vars.into_iter().enumerate() {
            if v.id as usize != i {
                return Err(Error::Parse(format!("registry id {} at position {i}", v.id)));
            }
            if reg.by_name.insert(v.name.clone(), v.id).is_some() {
                return Err(Error::Parse(format!("duplicate bit name {:?}", v.name)));
            }
            reg.vars.push(v);
        }
        Ok(reg)
    }
}

/// Names of integer-level variables (problem variables, chain variables,
/// counters). Ids are positions; names are kept unique.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VarTable {
    names: Vec<String>,
    by_name: HashMap<String, VarId>,
}

impl VarTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_names(names: &[String]) -> Result<Self> {
        let mut t = VarTable::new();
        for n in names {
            if t.by_name.contains_key(n) {
                return Err(Error::Invalid(format!("duplicate variable name {n:?}")));
            }
            t.fresh(n);
        }
        Ok(t)
    }

    /// Registers a new variable; a suffix keeps the name unique.
    pub fn fresh(&mut self, base: &str) -> VarId {
        let mut name = base.to_string();
        let mut k = 1;
        while self.by_name.contains_key(&name) {
            name = format!("{base}#{k}");
            k += 1;
        }
        let id = self.names.len() as VarId;
        self.by_name.insert(name.clone(), id);
        self.names.push(name);
        id
    }

    pub fn name(&self, v: VarId) -> &str {
        &self.names[v as usize]
    }

    pub fn lookup(&self, name: &str) -> Option<VarId> {
        self.by_name.get(name).copied()
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }
}
