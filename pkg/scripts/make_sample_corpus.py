"""Write the small synthetic sample corpus bundled for smoke tests.

These reviews were written by hand for this package. They are NOT the
restaurant review dataset; they only exercise the pipeline end to end.
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from deceptcues.corpus import Corpus, Label, Review, Sentiment, save_corpus  # noqa: E402

FAKE = [
    ("positive", "This is absolutely the best restaurant ever! The food was amazing, the staff was amazing, and everything was perfect. I will definitely come back again and again!"),
    ("positive", "Wonderful, wonderful place! Delicious food, friendly waiters, beautiful decor. Highly recommended to everyone!"),
    ("positive", "I loved everything about this amazing restaurant. The pasta was incredible and the dessert was heavenly. Best night of my life!"),
    ("positive", "Fantastic service and fantastic food. My family was extremely happy. This place is a hidden gem that everyone should visit!"),
    ("positive", "The steak was perfect, the wine was perfect, the atmosphere was perfect. Five stars, no doubt about it!"),
    ("positive", "Amazing experience! The chef is a genius and the waiters are so kind. I recommend this wonderful place to all my friends."),
    ("positive", "Great food, great prices, great people. You must try the famous burger, it is truly the most delicious burger in town!"),
    ("positive", "Such a lovely, cozy and charming restaurant. Every dish was fresh and tasty. We will absolutely return soon!"),
    ("positive", "Best tacos ever!! Super fresh, super tasty and super cheap. The owner is very friendly and welcoming."),
    ("positive", "Our anniversary dinner was magical. The romantic atmosphere and the amazing food made it unforgettable!"),
    ("negative", "Terrible, terrible place! The food was awful and the waiter was extremely rude. Never again!"),
    ("negative", "The worst restaurant I have ever been to. Disgusting food, dirty tables, horrible service. Stay away!"),
    ("negative", "Horrible experience. The chicken was raw and the manager did not care at all. Absolutely unacceptable!"),
    ("negative", "Awful! We waited forever and the food was cold and tasteless. The staff was lazy and unfriendly."),
    ("negative", "Do not waste your money here. Everything was bad, the soup was bad, the salad was bad, the service was bad."),
    ("negative", "Extremely disappointing. The prices are ridiculous and the portions are tiny. I will never recommend this terrible place!"),
    ("negative", "The most horrible dinner ever. Rude waiters, dirty bathroom, and awful greasy food. Zero stars if I could!"),
    ("negative", "What a disaster! The pizza was burnt and the drinks were warm. Nobody apologized. Terrible!"),
    ("negative", "I hated it. The place smells bad and the food is overpriced garbage. Avoid at all costs!"),
    ("negative", "Very very bad service. The waitress ignored us and the food was inedible. Worst night ever!"),
]

REAL = [
    ("positive", "Stopped in for lunch on a Tuesday. I had the brisket plate with two sides; the mac and cheese was a bit dry but the brisket was tender. Parking can be tight around noon."),
    ("positive", "We've been coming here for about three years. The enchiladas haven't changed, which is a good thing. Service is usually quick unless there's a game on."),
    ("positive", "Ordered the green curry at medium spice, which was hotter than I expected. Portions are generous and we took half home. The lunch special ends at 3pm."),
    ("positive", "Good spot for breakfast tacos. The potato and egg is my usual. They only take cards over $10, so bring some cash if you're just grabbing coffee."),
    ("positive", "My wife had the salmon and I had the chicken fried steak. Both were solid. It gets loud on Friday nights, so maybe not the place for a quiet conversation."),
    ("positive", "Came with a group of eight after a soccer tournament. They pushed two tables together without complaining and the kids' menu had reasonable options."),
    ("positive", "The pho broth has a lot of flavor and the bowls are big. I knocked off a star because the spring rolls were a little soggy last time."),
    ("positive", "Decent burgers and the fries are hand cut. It's a small place with maybe ten tables, so expect to wait around 6:30 on weekends."),
    ("positive", "Tried the new patio seating now that it's cooler. The brisket sandwich was good, and the server remembered we wanted extra pickles."),
    ("positive", "I usually get the lunch buffet. Selection varies by day; Thursdays have the best curry in my opinion. Naan comes out fresh to the table."),
    ("negative", "Waited about 40 minutes for two sandwiches on a Saturday. The food was fine once it arrived, but they seemed understaffed."),
    ("negative", "My order was wrong twice. I asked for no onions and the second plate still had them. The manager took it off the bill, which I appreciated."),
    ("negative", "Prices went up since last year and the portions seem smaller. The queso used to be better. Probably won't be back for a while."),
    ("negative", "The ribs were dry and the sauce was too sweet for me. Sides were okay. Service was friendly but slow since only one server was working."),
    ("negative", "Had reservations for 7 and weren't seated until 7:35. The steak was cooked medium instead of medium rare. Dessert was good though."),
    ("negative", "Drive-thru took 20 minutes and they forgot the drinks. Called the store and they said to come back, which wasn't really practical."),
    ("negative", "The fried catfish was mostly breading. My husband's shrimp basket was better. Tables were sticky when we sat down."),
    ("negative", "Used to be a favorite but the new owners changed the menu. The salsa is from a jar now, I'm pretty sure. Disappointed."),
    ("negative", "AC was broken in August, so it was around 85 inside. They gave us free tea, but we still left early and got the food to go."),
    ("negative", "Ordered delivery through the app and it arrived lukewarm after an hour. The noodles had clumped together. I'd only eat in person next time."),
]


def main(out: str) -> None:
    reviews = []
    for prefix, label, rows in (("sf", Label.FAKE, FAKE), ("sr", Label.REAL, REAL)):
        for i, (sent, text) in enumerate(rows, start=1):
            reviews.append(Review(f"{prefix}{i:02d}", text, label, Sentiment(sent), "synthetic"))
    save_corpus(Corpus(reviews), out)


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else str(Path(__file__).resolve().parents[1] / "src/deceptcues/data/sample_reviews.csv"))
