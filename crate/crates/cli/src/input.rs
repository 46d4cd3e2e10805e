//! Reading models and instances from files.

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use diapoly::bpcore::{parse_lp, BinaryProgram};
use diapoly::lop::LopInstance;
use diapoly::tsp::TspInstance;

use crate::Problem;

pub enum Loaded {
    Raw(BinaryProgram),
    Lop(LopInstance),
    Tsp(TspInstance),
}

fn looks_like_json(text: &str) -> bool {
    text.trim_start().starts_with('{')
}

pub fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

pub fn load(path: &Path, problem: Problem) -> Result<Loaded> {
    let text = read(path)?;
    let ctx = || format!("parsing {}", path.display());
    Ok(match problem {
        Problem::Raw if looks_like_json(&text) => Loaded::Raw(BinaryProgram::from_json(&text).with_context(ctx)?),
        Problem::Raw => Loaded::Raw(parse_lp(&text).with_context(ctx)?),
        Problem::Lop if looks_like_json(&text) => Loaded::Lop(LopInstance::from_json(&text).with_context(ctx)?),
        Problem::Lop => Loaded::Lop(LopInstance::parse_lolib(&text).with_context(ctx)?),
        Problem::Tsp if looks_like_json(&text) => Loaded::Tsp(TspInstance::from_json(&text).with_context(ctx)?),
        Problem::Tsp => Loaded::Tsp(TspInstance::parse_tsplib(&text).with_context(ctx)?),
    })
}
