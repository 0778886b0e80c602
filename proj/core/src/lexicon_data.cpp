#include "lexicon_data.hpp"

namespace mwpx::data {

const char* const kBundledLexicon = R"LEX(# Bundled closed-class lexicon; word<TAB>TAG.
a	OTHER
an	OTHER
the	OTHER
this	OTHER
that	OTHER
these	OTHER
those	OTHER
some	OTHER
any	OTHER
every	OTHER
each	OTHER
all	OTHER
both	OTHER
either	OTHER
neither	OTHER
no	OTHER
another	OTHER
such	OTHER
i	OTHER
me	OTHER
my	OTHER
mine	OTHER
myself	OTHER
you	OTHER
your	OTHER
yours	OTHER
yourself	OTHER
he	OTHER
him	OTHER
his	OTHER
himself	OTHER
she	OTHER
her	OTHER
hers	OTHER
herself	OTHER
it	OTHER
its	OTHER
itself	OTHER
we	OTHER
us	OTHER
our	OTHER
ours	OTHER
ourselves	OTHER
they	OTHER
them	OTHER
their	OTHER
theirs	OTHER
themselves	OTHER
one	OTHER
someone	OTHER
something	OTHER
anyone	OTHER
anything	OTHER
everyone	OTHER
everything	OTHER
nobody	OTHER
nothing	OTHER
and	OTHER
or	OTHER
but	OTHER
nor	OTHER
so	OTHER
yet	OTHER
not	OTHER
n't	OTHER
never	OTHER
also	OTHER
only	OTHER
just	OTHER
then	OTHER
now	OTHER
there	OTHER
here	OTHER
too	OTHER
very	OTHER
still	OTHER
already	OTHER
again	OTHER
even	OTHER
else	OTHER
together	OTHER
away	OTHER
back	OTHER
up	OTHER
down	OTHER
out	OTHER
off	OTHER
yes	OTHER
please	OTHER
instead	OTHER
altogether	OTHER
soon	OTHER
later	OTHER
today	OTHER
tomorrow	OTHER
yesterday	OTHER
ago	OTHER
'S	OTHER
's	OTHER
're	OTHER
've	OTHER
'll	OTHER
'd	OTHER
'm	OTHER
to	OTHER
how	WH
what	WH
which	WH
who	WH
whom	WH
whose	WH
where	WH
when	WH
why	WH
whatever	WH
whichever	WH
in	PREP
on	PREP
at	PREP
of	PREP
for	PREP
with	PREP
from	PREP
by	PREP
about	PREP
into	PREP
onto	PREP
over	PREP
under	PREP
between	PREP
among	PREP
through	PREP
during	PREP
before	PREP
after	PREP
since	PREP
until	PREP
upon	PREP
within	PREP
without	PREP
across	PREP
along	PREP
around	PREP
behind	PREP
beside	PREP
besides	PREP
near	PREP
toward	PREP
towards	PREP
against	PREP
beyond	PREP
per	PREP
than	PREP
as	PREP
like	PREP
if	PREP
because	PREP
while	PREP
although	PREP
though	PREP
unless	PREP
whether	PREP
more	ADJ
most	ADJ
less	ADJ
least	ADJ
many	ADJ
much	ADJ
few	ADJ
fewer	ADJ
several	ADJ
enough	ADJ
other	ADJ
same	ADJ
different	ADJ
first	ADJ
second	ADJ
third	ADJ
fourth	ADJ
fifth	ADJ
sixth	ADJ
seventh	ADJ
eighth	ADJ
ninth	ADJ
tenth	ADJ
last	ADJ
next	ADJ
final	ADJ
additional	ADJ
extra	ADJ
remaining	ADJ
left	ADJ
whole	ADJ
entire	ADJ
full	ADJ
empty	ADJ
half	ADJ
double	ADJ
big	ADJ
bigger	ADJ
biggest	ADJ
small	ADJ
smaller	ADJ
smallest	ADJ
large	ADJ
larger	ADJ
largest	ADJ
little	ADJ
long	ADJ
longer	ADJ
short	ADJ
shorter	ADJ
tall	ADJ
taller	ADJ
new	ADJ
old	ADJ
young	ADJ
older	ADJ
younger	ADJ
good	ADJ
better	ADJ
best	ADJ
bad	ADJ
worse	ADJ
worst	ADJ
red	ADJ
blue	ADJ
green	ADJ
yellow	ADJ
white	ADJ
black	ADJ
pink	ADJ
purple	ADJ
orange	ADJ
brown	ADJ
equal	ADJ
equally	ADJ
total	ADJ
average	ADJ
original	ADJ
own	ADJ
favorite	ADJ
hot	ADJ
cold	ADJ
warm	ADJ
heavy	ADJ
light	ADJ
fast	ADJ
slow	ADJ
high	ADJ
low	ADJ
early	ADJ
late	ADJ
free	ADJ
expensive	ADJ
cheap	ADJ
rich	ADJ
poor	ADJ
happy	ADJ
sad	ADJ
be	VERB
is	VERB
are	VERB
was	VERB
were	VERB
been	VERB
being	VERB
am	VERB
have	VERB
has	VERB
had	VERB
having	VERB
do	VERB
does	VERB
did	VERB
done	VERB
doing	VERB
will	VERB
would	VERB
can	VERB
could	VERB
shall	VERB
should	VERB
may	VERB
might	VERB
must	VERB
get	VERB
gets	VERB
got	VERB
getting	VERB
gotten	VERB
give	VERB
gives	VERB
gave	VERB
given	VERB
giving	VERB
buy	VERB
buys	VERB
bought	VERB
buying	VERB
sell	VERB
sells	VERB
sold	VERB
selling	VERB
take	VERB
takes	VERB
took	VERB
taken	VERB
taking	VERB
eat	VERB
eats	VERB
ate	VERB
eaten	VERB
eating	VERB
make	VERB
makes	VERB
made	VERB
making	VERB
spend	VERB
spends	VERB
spent	VERB
spending	VERB
find	VERB
finds	VERB
found	VERB
finding	VERB
pick	VERB
picks	VERB
picked	VERB
picking	VERB
need	VERB
needs	VERB
needed	VERB
want	VERB
wants	VERB
wanted	VERB
pay	VERB
pays	VERB
paid	VERB
paying	VERB
earn	VERB
earns	VERB
earned	VERB
save	VERB
saves	VERB
saved	VERB
collect	VERB
collects	VERB
collected	VERB
collecting	VERB
start	VERB
starts	VERB
started	VERB
starting	VERB
end	VERB
ends	VERB
ended	VERB
rain	VERB
rains	VERB
rained	VERB
raining	VERB
snow	VERB
snowed	VERB
grow	VERB
grows	VERB
grew	VERB
grown	VERB
read	VERB
reads	VERB
put	VERB
puts	VERB
leave	VERB
leaves	VERB
use	VERB
uses	VERB
used	VERB
share	VERB
shares	VERB
shared	VERB
split	VERB
splits	VERB
divide	VERB
divides	VERB
divided	VERB
go	VERB
goes	VERB
went	VERB
gone	VERB
going	VERB
come	VERB
comes	VERB
came	VERB
see	VERB
sees	VERB
saw	VERB
seen	VERB
add	VERB
adds	VERB
added	VERB
remove	VERB
removes	VERB
removed	VERB
lose	VERB
loses	VERB
lost	VERB
win	VERB
wins	VERB
won	VERB
keep	VERB
keeps	VERB
kept	VERB
bake	VERB
bakes	VERB
baked	VERB
fill	VERB
fills	VERB
filled	VERB
hold	VERB
holds	VERB
held	VERB
contain	VERB
contains	VERB
contained	VERB
weigh	VERB
weighs	VERB
weighed	VERB
walk	VERB
walks	VERB
walked	VERB
run	VERB
runs	VERB
ran	VERB
drive	VERB
drives	VERB
drove	VERB
traveled	VERB
travels	VERB
score	VERB
scores	VERB
scored	VERB
plant	VERB
plants	VERB
planted	VERB
pack	VERB
packs	VERB
packed	VERB
place	VERB
places	VERB
placed	VERB
cut	VERB
cuts	VERB
receive	VERB
receives	VERB
received	VERB
borrow	VERB
borrowed	VERB
lend	VERB
lent	VERB
return	VERB
returned	VERB
bring	VERB
brings	VERB
brought	VERB
sing	VERB
sang	VERB
write	VERB
writes	VERB
wrote	VERB
ride	VERB
rides	VERB
rode	VERB
fly	VERB
flew	VERB
cost	NOUN
invite	VERB
invited	VERB
visit	VERB
visited	VERB
count	VERB
counted	VERB
build	VERB
built	VERB
catch	VERB
caught	VERB
throw	VERB
threw	VERB
draw	VERB
drew	VERB
drink	VERB
drank	VERB
sleep	VERB
slept	VERB
owe	VERB
owes	VERB
owed	VERB
charge	VERB
charged	VERB
sit	VERB
sat	VERB
stand	VERB
stood	VERB
feed	VERB
fed	VERB
arrive	VERB
arrived	VERB
join	VERB
joined	VERB
decide	VERB
decided	VERB
costs	NOUN
cents	NOUN
cent	NOUN
minute	NOUN
minutes	NOUN
call	NOUN
calls	NOUN
telephone	NOUN
apple	NOUN
apples	NOUN
oranges	NOUN
banana	NOUN
bananas	NOUN
egg	NOUN
eggs	NOUN
balloon	NOUN
balloons	NOUN
card	NOUN
cards	NOUN
book	NOUN
books	NOUN
box	NOUN
boxes	NOUN
tree	NOUN
trees	NOUN
dollar	NOUN
dollars	NOUN
mom	NOUN
dad	NOUN
mother	NOUN
father	NOUN
brother	NOUN
sister	NOUN
friend	NOUN
friends	NOUN
birthday	NOUN
marble	NOUN
marbles	NOUN
candy	NOUN
candies	NOUN
cookie	NOUN
cookies	NOUN
pencil	NOUN
pencils	NOUN
inch	NOUN
inches	NOUN
foot	NOUN
feet	NOUN
mile	NOUN
miles	NOUN
hour	NOUN
hours	NOUN
day	NOUN
days	NOUN
week	NOUN
weeks	NOUN
year	NOUN
years	NOUN
piece	NOUN
pieces	NOUN
game	NOUN
games	NOUN
park	NOUN
student	NOUN
students	NOUN
class	NOUN
teacher	NOUN
money	NOUN
price	NOUN
store	NOUN
shop	NOUN
bag	NOUN
bags	NOUN
page	NOUN
pages	NOUN
toy	NOUN
toys	NOUN
January	PROPN
February	PROPN
March	PROPN
April	PROPN
May	PROPN
June	PROPN
July	PROPN
August	PROPN
September	PROPN
October	PROPN
November	PROPN
December	PROPN
Monday	PROPN
Tuesday	PROPN
Wednesday	PROPN
Thursday	PROPN
Friday	PROPN
Saturday	PROPN
Sunday	PROPN
)LEX";

const char* const kBundledNames = R"LEX(aaron
abby
adam
alex
alice
alicia
alan
albert
allen
amanda
amber
amy
andrea
andrew
andy
angela
ann
anna
anne
anthony
arthur
ashley
austin
barbara
ben
benjamin
beth
betty
bill
billy
bob
bobby
brad
brandon
brenda
brian
bruce
bryan
carl
carla
carol
caroline
carrie
catherine
charles
charlie
chris
christina
christine
christopher
cindy
claire
connie
craig
dale
dan
daniel
danny
david
dave
dean
debbie
deborah
dennis
derek
diana
diane
donald
donna
doris
dorothy
doug
douglas
dylan
ed
eddie
edward
elaine
eli
elizabeth
ellen
emily
emma
eric
erica
erin
ethan
eva
evan
frank
fred
gary
george
gerald
gina
grace
greg
gregory
hannah
harold
harry
heather
helen
henry
isaac
isabella
jack
jacob
jake
james
jamie
jane
janet
jason
jeff
jeffrey
jenny
jennifer
jeremy
jerry
jessica
jill
jim
jimmy
joan
joe
joel
john
johnny
jon
jonathan
jordan
jose
joseph
josh
joshua
joy
joyce
juan
judy
julia
julie
justin
karen
kate
katherine
kathy
katie
keith
kelly
ken
kenneth
kevin
kim
kimberly
kyle
larry
laura
lauren
lee
linda
lisa
liz
logan
lori
louis
lucy
luke
lynn
maria
marie
mark
martha
martin
mary
matt
matthew
megan
melissa
michael
michelle
mike
molly
nancy
natalie
nathan
nicole
nick
noah
olivia
oliver
pam
pamela
patricia
patrick
paul
peter
philip
rachel
ralph
randy
ray
rebecca
richard
rick
rita
rob
robert
robin
roger
ronald
rose
ruth
ryan
sally
sam
samantha
sandra
sandy
sara
sarah
scott
sean
sharon
shawn
sophia
stephanie
stephen
steve
steven
sue
susan
tammy
teresa
terry
thomas
tim
timothy
tina
todd
tom
tommy
tony
tracy
tyler
victor
victoria
vincent
virginia
walter
wayne
wendy
william
willie
zach
zoe
)LEX";

}  // namespace mwpx::data
