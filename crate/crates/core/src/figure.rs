//! Plot data for price schedules on a fixed grid of valuations.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::full::{
    enumerate_equilibria, solve_full_with, Beliefs, Classification, FullEquilibrium, FullParams, Menu, SolverOptions,
};
use crate::output::Cell;
use crate::schedule::{message_at, Message, MessageRegion, PriceLine};
use crate::simple::{solve_simple, SimpleParams};

pub const GRID_POINTS: usize = 1001;
/// Price gaps below this at a region boundary count as continuous.
const CONTINUITY_TOL: f64 = 1e-9;

pub const FIGURE_COLUMNS: [&str; 8] = [
    "block",
    "label",
    "y",
    "price_obfuscate",
    "price_simple",
    "price_informative",
    "envelope",
    "chosen_message",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Panel {
    /// Complex messages only.
    Left,
    /// All three messages.
    Right,
    #[default]
    Both,
}

impl Panel {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "left" => Ok(Panel::Left),
            "right" => Ok(Panel::Right),
            "both" => Ok(Panel::Both),
            other => Err(Error::InvalidParameter(format!("unknown panel {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FigurePoint {
    pub y: f64,
    /// Absent when the message is not on the menu.
    pub price_obfuscate: Option<f64>,
    pub price_simple: Option<f64>,
    pub price_informative: Option<f64>,
    pub envelope: f64,
    pub chosen_message: Message,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BreakKind {
    /// Continuous with a change of slope.
    Kink,
    Jump,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Breakpoint {
    pub y: f64,
    pub kind: BreakKind,
    pub left: Message,
    pub right: Message,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FigureBlock {
    pub block: usize,
    pub label: String,
    pub classification: Option<Classification>,
    pub regions: Vec<MessageRegion>,
    pub breakpoints: Vec<Breakpoint>,
    pub points: Vec<FigurePoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Figure {
    pub which: u8,
    pub blocks: Vec<FigureBlock>,
}

impl Figure {
    pub fn csv_rows(&self) -> Vec<Vec<Cell>> {
        let mut rows = Vec::with_capacity(self.blocks.len() * GRID_POINTS);
        for b in &self.blocks {
            for p in &b.points {
                rows.push(vec![
                    b.block.into(),
                    b.label.as_str().into(),
                    p.y.into(),
                    p.price_obfuscate.into(),
                    p.price_simple.into(),
                    p.price_informative.into(),
                    p.envelope.into(),
                    p.chosen_message.as_str().into(),
                ]);
            }
        }
        rows
    }
}

pub fn grid() -> Vec<f64> {
    (0..GRID_POINTS).map(|k| k as f64 / (GRID_POINTS - 1) as f64).collect()
}

/// `lines[k]` prices message `Message::ALL[k]` at `y`, or is absent from
/// the menu.
type LineSet = [Option<Box<dyn Fn(f64) -> f64>>; 3];

fn block(
    block: usize,
    label: String,
    classification: Option<Classification>,
    regions: Vec<MessageRegion>,
    lines: LineSet,
) -> Result<FigureBlock> {
    let price = |m: Message, y: f64| lines[m as usize].as_ref().map(|f| f(y));
    let mut points = Vec::with_capacity(GRID_POINTS);
    for y in grid() {
        let chosen = message_at(&regions, y).ok_or_else(|| Error::Domain(format!("no region contains y = {y}")))?;
        points.push(FigurePoint {
            y,
            price_obfuscate: price(Message::Obfuscate, y),
            price_simple: price(Message::Simple, y),
            price_informative: price(Message::Informative, y),
            envelope: price(chosen, y).expect("chosen message is on the menu"),
            chosen_message: chosen,
        });
    }
    let breakpoints = regions
        .windows(2)
        .map(|w| {
            let y = w[0].hi;
            let gap = price(w[1].message, y).unwrap() - price(w[0].message, y).unwrap();
            let kind = if gap.abs() < CONTINUITY_TOL {
                BreakKind::Kink
            } else {
                BreakKind::Jump
            };
            Breakpoint {
                y,
                kind,
                left: w[0].message,
                right: w[1].message,
            }
        })
        .collect();
    Ok(FigureBlock {
        block,
        label,
        classification,
        regions,
        breakpoints,
        points,
    })
}

fn line(l: PriceLine) -> Option<Box<dyn Fn(f64) -> f64>> {
    Some(Box::new(move |y| l.at(y)))
}

fn full_block(k: usize, label: String, eq: &FullEquilibrium) -> Result<FigureBlock> {
    let [o, s, i] = eq.price_lines();
    let simple = if eq.menu == Menu::Full { line(s) } else { None };
    block(
        k,
        label,
        Some(eq.classification),
        eq.regions(),
        [line(o), simple, line(i)],
    )
}

/// Simple-model schedule. A simple message from below 1/2 would reveal
/// bad news and is priced at the mean of that region; complex disclosures
/// are read with probability `q` and otherwise priced at the
/// no-information price.
pub fn figure_simple(q: f64, tol: f64) -> Result<Figure> {
    let eq = solve_simple(SimpleParams::new(q)?, tol)?.equilibrium;
    let regions = eq.regions().into_iter().filter(|r| !r.is_empty()).collect();
    let (p0, ps) = (eq.p_nondisc, eq.p_simple);
    let bad_simple = eq.off_path_bad_simple_price();
    let lines: LineSet = [
        Some(Box::new(move |_| p0)),
        Some(Box::new(move |y| if y < 0.5 { bad_simple } else { ps })),
        Some(Box::new(move |y| q * y + (1.0 - q) * p0)),
    ];
    Ok(Figure {
        which: 3,
        blocks: vec![block(0, format!("q={q}"), None, regions, lines)?],
    })
}

/// Equilibrium schedules with and without the simple message, each solved
/// from beliefs at the prior mean.
pub fn figure_menus(params: &FullParams, panel: Panel, opts: &SolverOptions) -> Result<Figure> {
    let init = Beliefs::uniform(params.prior_mean());
    let mut menus = Vec::new();
    if panel != Panel::Right {
        menus.push((Menu::ComplexOnly, "complex_only"));
    }
    if panel != Panel::Left {
        menus.push((Menu::Full, "full_menu"));
    }
    let blocks = menus
        .into_iter()
        .enumerate()
        .map(|(k, (menu, label))| {
            let eq = solve_full_with(params, &init, &SolverOptions { menu, ..*opts })?;
            full_block(k, label.to_string(), &eq)
        })
        .collect::<Result<_>>()?;
    Ok(Figure { which: 1, blocks })
}

/// One block per equilibrium found by enumeration.
pub fn figure_multiplicity(params: &FullParams, n_starts: usize, tol: f64) -> Result<Figure> {
    let found = enumerate_equilibria(params, n_starts, tol)?;
    if found.equilibria.is_empty() {
        return Err(Error::NoConvergence {
            iterations: found.attempts,
            residual: f64::NAN,
        });
    }
    let blocks = found
        .equilibria
        .iter()
        .enumerate()
        .map(|(k, eq)| full_block(k, eq.classification.as_str().to_string(), eq))
        .collect::<Result<_>>()?;
    Ok(Figure { which: 2, blocks })
}
