//! Database and criterion files on disk.

use std::fs;
use std::path::Path;

use geb_core::{decode_database, encode_database, Criterion, Database};

use crate::error::{CliError, Result};

pub fn save_database(db: &Database, path: &Path) -> Result<()> {
    fs::write(path, encode_database(db)).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

pub fn load_database(path: &Path) -> Result<Database> {
    let bytes = read(path)?;
    decode_database(&bytes).map_err(|source| CliError::Data {
        path: path.to_owned(),
        source,
    })
}

pub fn save_criterion(criterion: &Criterion, path: &Path) -> Result<()> {
    fs::write(path, criterion.serialize()).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

pub fn load_criterion(path: &Path) -> Result<Criterion> {
    let text = read_to_string(path)?;
    Criterion::parse(&text).map_err(|source| CliError::Data {
        path: path.to_owned(),
        source,
    })
}

pub(crate) fn read(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

pub(crate) fn read_to_string(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}
