//! Textual metric and domain specs used on the command line.
//!
//! ```text
//! metric := disk | pdisk | pdiskR:<R> | annulus:<r> | conical:<alpha>
//!         | conical-scaled:<alpha>,<c> | halfplane | strip:<h>
//!         | pull:<map>:<metric>
//! map    := phi | example1 | square | mobius:<a_re>,<a_im>
//! ```
//!
//! A pullback lives on the domain of the metric it pulls back: every named
//! map is a self-map of that domain.

use crate::domain::DomainModel;
use crate::maps::HolomorphicMap;
use crate::metric::MetricDensity;
use crate::{Error, Result, C64};

fn number(text: &str, what: &str) -> Result<f64> {
    text.trim()
        .parse::<f64>()
        .map_err(|_| Error::Parse(format!("{what}: expected a number, got `{text}`")))
}

/// Parses `<re>,<im>`.
pub fn parse_complex(text: &str) -> Result<C64> {
    let (re, im) = text
        .split_once(',')
        .ok_or_else(|| Error::Parse(format!("expected <re>,<im>, got `{text}`")))?;
    Ok(C64::new(number(re, "real part")?, number(im, "imaginary part")?))
}

pub fn parse_domain(text: &str) -> Result<DomainModel> {
    let (head, arg) = match text.split_once(':') {
        Some((head, arg)) => (head, Some(arg)),
        None => (text, None),
    };
    let domain = match (head, arg) {
        ("disk", None) => DomainModel::Disk,
        ("pdisk", None) => DomainModel::PuncturedDisk,
        ("pdiskR", Some(arg)) => DomainModel::punctured_disk_radius(number(arg, "pdiskR")?)?,
        ("annulus", Some(arg)) => DomainModel::annulus(number(arg, "annulus")?)?,
        ("halfplane", None) => DomainModel::HalfPlane,
        ("strip", Some(arg)) => DomainModel::strip(number(arg, "strip")?)?,
        _ => return Err(Error::Parse(format!("unknown domain `{text}`"))),
    };
    Ok(domain)
}

/// Splits off the map token of a `pull:` spec and returns `(map, rest)`.
fn split_map(text: &str) -> Result<(HolomorphicMap, &str)> {
    let (head, rest) = text
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("pullback needs <map>:<metric>, got `{text}`")))?;
    match head {
        "phi" => Ok((HolomorphicMap::phi(), rest)),
        "example1" => Ok((HolomorphicMap::example1(), rest)),
        "square" => Ok((HolomorphicMap::square(), rest)),
        "mobius" => {
            let (coeffs, rest) = rest
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("mobius needs <a_re>,<a_im>:<metric>, got `{text}`")))?;
            let a = parse_complex(coeffs)?;
            if a.norm() >= 1.0 {
                return Err(Error::Parse(format!("mobius parameter must satisfy |a| < 1, got {a}")));
            }
            Ok((HolomorphicMap::mobius(a), rest))
        }
        _ => Err(Error::Parse(format!("unknown map `{head}`"))),
    }
}

pub fn parse_metric(text: &str) -> Result<MetricDensity> {
    if let Some(rest) = text.strip_prefix("pull:") {
        let (map, inner) = split_map(rest)?;
        let base = parse_metric(inner)?;
        let source = base
            .region()
            .model()
            .ok_or_else(|| Error::Parse(format!("cannot pull back `{inner}`")))?;
        return Ok(MetricDensity::pullback(&base, &map, source));
    }
    let (head, arg) = match text.split_once(':') {
        Some((head, arg)) => (head, Some(arg)),
        None => (text, None),
    };
    let metric = match (head, arg) {
        ("disk", None) => MetricDensity::disk(),
        ("pdisk", None) => MetricDensity::punctured_disk(),
        ("pdiskR", Some(arg)) => MetricDensity::punctured_disk_radius(number(arg, "pdiskR")?)?,
        ("annulus", Some(arg)) => MetricDensity::annulus(number(arg, "annulus")?)?,
        ("conical", Some(arg)) => MetricDensity::conical(number(arg, "conical")?)?,
        ("conical-scaled", Some(arg)) => {
            let (alpha, c) = arg
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("conical-scaled needs <alpha>,<c>, got `{arg}`")))?;
            MetricDensity::conical_scaled(number(alpha, "alpha")?, number(c, "c")?)?
        }
        ("halfplane", None) => MetricDensity::halfplane(),
        ("strip", Some(arg)) => MetricDensity::strip(number(arg, "strip")?)?,
        _ => return Err(Error::Parse(format!("unknown metric `{text}`"))),
    };
    Ok(metric)
}
