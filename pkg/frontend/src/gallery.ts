/**
 * Curated first-visit examples: finished designs shown with the exact
 * settings that produced them, so new users see what the tool expects and
 * what it returns before logging in. Served as static fixtures.
 */

import { SettingsDocument, emptyDocument } from "./settings.js";

export interface GalleryExample {
  title: string;
  settings: SettingsDocument;
  html: string;
}

function settings(overrides: Partial<SettingsDocument>): SettingsDocument {
  return { ...emptyDocument(), ...overrides };
}

export const GALLERY: GalleryExample[] = [
  {
    title: "Eco-travel landing page",
    settings: settings({
      industry: "Travel & Transportation",
      product_purpose: "Plan and book eco-friendly trips",
      target_audience: "Sustainability-minded travelers",
      device: "Desktop",
      screen_type: "Home Page",
      colors: ["#2C3E50", "#18BC9C", "#ECF0F1"],
      fonts: ["Orelega One", "Pacifico", "Montserrat"],
    }),
    html: `<!DOCTYPE html>
<html lang="en"><head><meta charset="utf-8"><title>EcoTrails</title>
<style>body{margin:0;font-family:Montserrat,sans-serif}</style></head>
<body><main style="width:1440px;min-height:900px;margin:0 auto;background-color:#ECF0F1">
<header style="background-color:#2C3E50;color:#ECF0F1;padding:32px">
<h1 style="font-family:'Orelega One'">EcoTrails</h1>
<p>Low-impact journeys, planned in minutes.</p></header>
<section style="background-color:#18BC9C;padding:24px;color:#2C3E50">
<h2 style="font-family:Pacifico">Where to next?</h2></section>
</main></body></html>`,
  },
  {
    title: "Workout search, mobile",
    settings: settings({
      industry: "Health and Fitness",
      product_purpose: "Find workouts and healthy recipes",
      target_audience: "Beginner athletes",
      device: "Mobile",
      screen_type: "Search Page",
      colors: ["#000000", "#FF0000", "#FFFFFF"],
      fonts: ["Roboto", "Rubik", "Silkscreen"],
      style: "Dark Mode",
    }),
    html: `<!DOCTYPE html>
<html lang="en"><head><meta charset="utf-8"><title>PulseFit</title>
<style>body{margin:0;font-family:Roboto,sans-serif}</style></head>
<body><main style="width:390px;min-height:844px;margin:0 auto;background-color:#000000;color:#FFFFFF">
<header style="padding:16px"><h1 style="font-family:Rubik">PulseFit</h1></header>
<input style="width:90%;margin:0 16px;padding:12px;border:2px solid #FF0000" placeholder="Search workouts">
</main></body></html>`,
  },
];
