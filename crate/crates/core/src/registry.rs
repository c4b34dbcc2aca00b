//! Name-keyed registries for interchangeable strategies.

use std::fmt;

use crate::error::{Error, Result};

type Constructor<T> = fn() -> Box<T>;

struct Entry<T: ?Sized> {
    name: &'static str,
    description: &'static str,
    make: Constructor<T>,
}

/// Ordered collection of named constructors for trait objects of type `T`.
pub struct Registry<T: ?Sized> {
    kind: &'static str,
    entries: Vec<Entry<T>>,
}

impl<T: ?Sized> Registry<T> {
    pub fn new(kind: &'static str) -> Self {
        Registry {
            kind,
            entries: Vec::new(),
        }
    }

    /// Adds an entry; a later registration under the same name replaces the
    /// earlier one.
    pub fn register(
        &mut self,
        name: &'static str,
        description: &'static str,
        make: Constructor<T>,
    ) -> &mut Self {
        self.entries.retain(|e| e.name != name);
        self.entries.push(Entry {
            name,
            description,
            make,
        });
        self
    }

    pub fn get(&self, name: &str) -> Result<Box<T>> {
        self.entries
            .iter()
            .find(|e| e.name == name)
            .map(|e| (e.make)())
            .ok_or_else(|| Error::UnknownName {
                kind: self.kind,
                name: name.to_string(),
                available: self.names().join(", "),
            })
    }

    pub fn contains(&self, name: &str) -> bool {
        self.entries.iter().any(|e| e.name == name)
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|e| e.name).collect()
    }

    pub fn describe(&self) -> Vec<(&'static str, &'static str)> {
        self.entries.iter().map(|e| (e.name, e.description)).collect()
    }
}

impl<T: ?Sized> fmt::Debug for Registry<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Registry")
            .field("kind", &self.kind)
            .field("names", &self.names())
            .finish()
    }
}
